//! End-to-end orchestration: corpus to cube to decomposition and
//! transmission reports, plus the journal delineation chain, with
//! deterministic table/csv/json rendering.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cooccur::{build_cube, CoocCube, CubeError, CubeSpec};
use crate::corpus::{parse_corpus, CorpusError, CountryTable, GroupingScheme, UnmatchedPolicy};
use crate::delineate::{
    central_tendency, principal_factors, DelineateError, FactorModel, JournalCitationMatrix,
};
use crate::entropy::{decompose, transmissions, EntropyDecomposition, EntropyError, TransmissionReport};
use crate::textprep::{Stopwords, TextError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("corpus stage: {0}")]
    Corpus(#[from] CorpusError),
    #[error("text stage: {0}")]
    Text(#[from] TextError),
    #[error("cube stage: {0}")]
    Cube(#[from] CubeError),
    #[error("entropy stage: {0}")]
    Entropy(#[from] EntropyError),
    #[error("delineation stage: {0}")]
    Delineate(#[from] DelineateError),
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl PipelineError {
    /// 1 for input/config problems, 2 for degenerate data.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Cube(CubeError::Degenerate(_) | CubeError::ZeroTotal) => 2,
            PipelineError::Entropy(_) => 2,
            PipelineError::Delineate(DelineateError::ZeroTotals(_)) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(Self::Table),
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(format!("unknown format {s:?}; use table, csv or json")),
        }
    }
}

/// Inputs and knobs for one `analyze` run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: PathBuf,
    pub schemes: Vec<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub top_words: usize,
    pub top_refs: usize,
    pub min_token_len: usize,
    pub unmatched: UnmatchedPolicy,
}

impl RunConfig {
    pub fn new(input: PathBuf, schemes: Vec<PathBuf>) -> Self {
        RunConfig {
            input,
            schemes,
            stopwords: None,
            top_words: 250,
            top_refs: 250,
            min_token_len: 2,
            unmatched: UnmatchedPolicy::Drop,
        }
    }

    fn validate(&self) -> Result<(), PipelineError> {
        if self.schemes.is_empty() {
            return Err(PipelineError::Config(
                "at least one grouping scheme is required".into(),
            ));
        }
        if self.top_words == 0 || self.top_refs == 0 {
            return Err(PipelineError::Config(
                "top-words and top-refs must be positive".into(),
            ));
        }
        if self.min_token_len == 0 {
            return Err(PipelineError::Config("min-token-len must be positive".into()));
        }
        Ok(())
    }

    fn stopwords(&self) -> Result<Stopwords, PipelineError> {
        Ok(match &self.stopwords {
            Some(path) => Stopwords::from_path(path)?,
            None => Stopwords::bundled(),
        })
    }
}

/// One analysis level: decomposition and transmissions for one grouping
/// scheme applied to the corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    pub level: String,
    pub group_count: usize,
    pub x_vocabulary: usize,
    pub y_vocabulary: usize,
    pub decomposition: EntropyDecomposition,
    pub transmission: TransmissionReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub documents: usize,
    pub levels: Vec<LevelReport>,
}

/// Runs the full chain for every configured grouping level.
pub fn cmd_analyze(config: &RunConfig) -> Result<AnalysisReport, PipelineError> {
    config.validate()?;
    let table = CountryTable::bundled();
    let stopwords = config.stopwords()?;
    let docs = parse_corpus(BufReader::new(File::open(&config.input)?))?;
    if docs.is_empty() {
        return Err(PipelineError::Cube(CubeError::Degenerate(
            "corpus is empty".into(),
        )));
    }

    let mut levels = Vec::with_capacity(config.schemes.len());
    for scheme_path in &config.schemes {
        let scheme = GroupingScheme::from_path(scheme_path)?.with_policy(config.unmatched);
        let spec = CubeSpec {
            top_refs: config.top_refs,
            top_words: config.top_words,
            min_token_len: config.min_token_len,
            stopwords: stopwords.clone(),
            scheme,
        };
        let cube = build_cube(&docs, &spec, &table)?;
        levels.push(LevelReport {
            level: spec.scheme.name.clone(),
            group_count: cube.z_labels().len(),
            x_vocabulary: cube.x_labels().len(),
            y_vocabulary: cube.y_labels().len(),
            decomposition: decompose(&cube)?,
            transmission: transmissions(&cube)?,
        });
    }
    Ok(AnalysisReport {
        documents: docs.len(),
        levels,
    })
}

/// Builds the cube for one scheme; used by the `cube` subcommand.
pub fn cmd_cube(config: &RunConfig) -> Result<CoocCube, PipelineError> {
    config.validate()?;
    if config.schemes.len() != 1 {
        return Err(PipelineError::Config(
            "cube export takes exactly one grouping scheme".into(),
        ));
    }
    let table = CountryTable::bundled();
    let docs = parse_corpus(BufReader::new(File::open(&config.input)?))?;
    let scheme = GroupingScheme::from_path(&config.schemes[0])?.with_policy(config.unmatched);
    let spec = CubeSpec {
        top_refs: config.top_refs,
        top_words: config.top_words,
        min_token_len: config.min_token_len,
        stopwords: config.stopwords()?,
        scheme,
    };
    Ok(build_cube(&docs, &spec, &table)?)
}

/// Inputs for one `delineate` run.
#[derive(Debug, Clone)]
pub struct DelineateConfig {
    pub matrix: PathBuf,
    pub seed: String,
    pub threshold: f64,
    pub criterion: f64,
    pub varimax: bool,
    pub varimax_tol: f64,
    pub varimax_max_sweeps: usize,
    pub impacts: Option<HashMap<String, f64>>,
}

impl DelineateConfig {
    pub fn new(matrix: PathBuf, seed: String) -> Self {
        DelineateConfig {
            matrix,
            seed,
            threshold: 0.01,
            criterion: 1.0,
            varimax: false,
            varimax_tol: 1e-8,
            varimax_max_sweeps: 100,
            impacts: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DelineationReport {
    pub seed: String,
    pub threshold: f64,
    pub environment: Vec<String>,
    pub model: FactorModel,
    /// Central tendency journal per retained factor.
    pub central_tendency: Vec<String>,
}

/// Runs the delineation chain: environment, correlations, factor
/// extraction, optional varimax rotation, central tendency journals.
pub fn cmd_delineate(config: &DelineateConfig) -> Result<DelineationReport, PipelineError> {
    let matrix = JournalCitationMatrix::from_path(&config.matrix)?;
    let env = matrix.environment(&config.seed, config.threshold)?;
    let (names, corr) = matrix.correlation_matrix(&env)?;
    let mut model = principal_factors(&corr, &names, config.criterion)?;
    if config.varimax {
        model = model.rotate_varimax(config.varimax_tol, config.varimax_max_sweeps);
    }
    let mut central = Vec::with_capacity(model.factor_count());
    for f in 0..model.factor_count() {
        central.push(central_tendency(&model, f, config.impacts.as_ref())?.to_string());
    }
    Ok(DelineationReport {
        seed: config.seed.clone(),
        threshold: config.threshold,
        environment: env.into_iter().collect(),
        model,
        central_tendency: central,
    })
}

const DECOMP_COLUMNS: &str = "level,group_count,Htot,SigmaH,H0,pctH0";
const TRANS_COLUMNS: &str = "level,Hx,Hy,Hz,Hxy,Hxz,Hyz,Hxyz,Txy,Txz,Tyz,Txyz";

/// Renders an analysis report. Table mode rounds to 2 decimals in the
/// published column order; csv and json keep full precision. Output is
/// byte-stable for identical inputs.
pub fn render(report: &AnalysisReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut out =
                serde_json::to_string_pretty(report).expect("report serialization cannot fail");
            out.push('\n');
            out
        }
        OutputFormat::Csv => {
            let mut out = String::new();
            out.push_str(DECOMP_COLUMNS);
            out.push('\n');
            for level in &report.levels {
                let d = &level.decomposition;
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    level.level, level.group_count, d.h_total, d.sigma_h, d.h0, d.pct_h0
                )
                .unwrap();
            }
            out.push('\n');
            out.push_str(TRANS_COLUMNS);
            out.push('\n');
            for level in &report.levels {
                let t = &level.transmission;
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{}",
                    level.level,
                    t.h_x,
                    t.h_y,
                    t.h_z,
                    t.h_xy,
                    t.h_xz,
                    t.h_yz,
                    t.h_xyz,
                    t.t_xy,
                    t.t_xz,
                    t.t_yz,
                    t.t_xyz
                )
                .unwrap();
            }
            out
        }
        OutputFormat::Table => {
            let mut out = String::new();
            writeln!(out, "Between-group entropy").unwrap();
            writeln!(
                out,
                "{:<12} {:>7} {:>7} {:>7} {:>7} {:>7}",
                "level", "groups", "Htot", "SigmaH", "H0", "%H0"
            )
            .unwrap();
            for level in &report.levels {
                let d = &level.decomposition;
                writeln!(
                    out,
                    "{:<12} {:>7} {:>7.2} {:>7.2} {:>7.2} {:>7.2}",
                    level.level, level.group_count, d.h_total, d.sigma_h, d.h0, d.pct_h0
                )
                .unwrap();
            }
            writeln!(out).unwrap();
            writeln!(out, "Transmission").unwrap();
            writeln!(
                out,
                "{:<12} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6}",
                "level", "Hx", "Hy", "Hz", "Hxy", "Hxz", "Hyz", "Hxyz", "Txy", "Txz", "Tyz",
                "Txyz"
            )
            .unwrap();
            for level in &report.levels {
                let t = &level.transmission;
                writeln!(
                    out,
                    "{:<12} {:>6.2} {:>6.2} {:>6.2} {:>6.2} {:>6.2} {:>6.2} {:>6.2} {:>6.2} {:>6.2} {:>6.2} {:>6.2}",
                    level.level,
                    t.h_x,
                    t.h_y,
                    t.h_z,
                    t.h_xy,
                    t.h_xz,
                    t.h_yz,
                    t.h_xyz,
                    t.t_xy,
                    t.t_xz,
                    t.t_yz,
                    t.t_xyz
                )
                .unwrap();
            }
            out
        }
    }
}

/// Renders a delineation report as JSON (full precision, stable order).
pub fn render_delineation(report: &DelineationReport) -> String {
    let mut out =
        serde_json::to_string_pretty(report).expect("report serialization cannot fail");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::GroupTerm;

    fn sample_report() -> AnalysisReport {
        AnalysisReport {
            documents: 42,
            levels: vec![LevelReport {
                level: "blocs".into(),
                group_count: 3,
                x_vocabulary: 250,
                y_vocabulary: 250,
                decomposition: EntropyDecomposition {
                    h_total: 10.82,
                    groups: vec![GroupTerm {
                        label: "EU".into(),
                        weight: 1.0,
                        entropy: 10.04,
                    }],
                    sigma_h: 10.04,
                    h0: 0.78,
                    pct_h0: 7.21,
                },
                transmission: TransmissionReport {
                    h_x: 7.61,
                    h_y: 6.59,
                    h_z: 0.77,
                    h_xy: 10.72,
                    h_xz: 7.98,
                    h_yz: 6.95,
                    h_xyz: 10.82,
                    t_xy: 3.48,
                    t_xz: 0.40,
                    t_yz: 0.41,
                    t_xyz: 4.15,
                },
            }],
        }
    }

    #[test]
    fn table_row_matches_published_layout() {
        let text = render(&sample_report(), OutputFormat::Table);
        let row = text
            .lines()
            .find(|l| l.starts_with("blocs"))
            .expect("decomposition row");
        let fields: Vec<&str> = row.split_whitespace().collect();
        assert_eq!(fields[2..], ["10.82", "10.04", "0.78", "7.21"]);
    }

    #[test]
    fn empty_report_renders_headers_only() {
        let empty = AnalysisReport {
            documents: 0,
            levels: vec![],
        };
        let csv = render(&empty, OutputFormat::Csv);
        assert!(csv.contains(DECOMP_COLUMNS));
        assert!(csv.contains(TRANS_COLUMNS));
        let table = render(&empty, OutputFormat::Table);
        assert!(table.contains("Htot"));
    }

    #[test]
    fn json_round_trips_exactly() {
        let report = sample_report();
        let json = render(&report, OutputFormat::Json);
        let back: AnalysisReport = serde_json::from_str(&json).unwrap();
        assert_eq!(report, back);
    }

    #[test]
    fn table_values_are_rounded_json_values() {
        let report = sample_report();
        let table = render(&report, OutputFormat::Table);
        let t = &report.levels[0].transmission;
        for value in [t.h_x, t.t_xy, t.t_xyz] {
            let rounded = format!("{value:.2}");
            assert!(table.contains(&rounded), "{rounded} missing from table");
        }
    }

    #[test]
    fn rendering_is_deterministic() {
        let report = sample_report();
        for format in [OutputFormat::Table, OutputFormat::Csv, OutputFormat::Json] {
            assert_eq!(render(&report, format), render(&report, format));
        }
    }
}
