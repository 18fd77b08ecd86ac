use std::collections::HashMap;
use std::fs::File;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sciento::corpus::UnmatchedPolicy;
use sciento::pipeline::{
    cmd_analyze, cmd_cube, cmd_delineate, render, render_delineation, DelineateConfig,
    OutputFormat, PipelineError, RunConfig,
};

#[derive(Parser)]
#[command(
    name = "sciento",
    about = "Entropy and transmission analysis of distributed scientific communication"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full chain: corpus -> vocabularies -> cube -> decomposition and
    /// transmission tables, once per grouping scheme.
    Analyze {
        /// JSONL corpus, one document object per line.
        #[arg(long)]
        input: PathBuf,
        /// Grouping scheme file (CODE<TAB>GROUP); repeatable, one
        /// analysis level per scheme.
        #[arg(long = "scheme", required = true)]
        schemes: Vec<PathBuf>,
        /// Stopword file overriding the bundled English list.
        #[arg(long)]
        stopwords: Option<PathBuf>,
        #[arg(long, default_value_t = 250)]
        top_words: usize,
        #[arg(long, default_value_t = 250)]
        top_refs: usize,
        #[arg(long, default_value_t = 2)]
        min_token_len: usize,
        /// Policy for countries outside the scheme: drop, error or other.
        #[arg(long, default_value = "drop")]
        unmatched: UnmatchedPolicy,
        #[arg(long, default_value = "table")]
        format: OutputFormat,
    },
    /// Delineate a journal citation environment and factor-analyze it.
    Delineate {
        /// Journal-journal citation matrix CSV (citing rows, cited columns).
        #[arg(long)]
        matrix: PathBuf,
        /// Seed journal name.
        #[arg(long)]
        seed: String,
        /// Environment threshold as a fraction of the seed's citations.
        #[arg(long, default_value_t = 0.01)]
        threshold: f64,
        /// Eigenvalue floor for factor retention.
        #[arg(long, default_value_t = 1.0)]
        criterion: f64,
        /// Apply varimax rotation to the retained loadings.
        #[arg(long)]
        varimax: bool,
        /// Impact values CSV (journal,value) used to break loading ties.
        #[arg(long)]
        impacts: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: OutputFormat,
    },
    /// Build a co-occurrence cube and write its canonical JSON form.
    Cube {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long)]
        stopwords: Option<PathBuf>,
        #[arg(long, default_value_t = 250)]
        top_words: usize,
        #[arg(long, default_value_t = 250)]
        top_refs: usize,
        #[arg(long, default_value_t = 2)]
        min_token_len: usize,
        #[arg(long, default_value = "drop")]
        unmatched: UnmatchedPolicy,
        /// Output path for the cube JSON.
        #[arg(long)]
        out: PathBuf,
    },
}

fn load_impacts(path: &PathBuf) -> Result<HashMap<String, f64>, PipelineError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(File::open(path)?);
    let mut impacts = HashMap::new();
    for record in rdr.records() {
        let record = record.map_err(|e| PipelineError::Config(e.to_string()))?;
        if record.len() != 2 {
            return Err(PipelineError::Config(format!(
                "impacts file: expected journal,value rows, got {record:?}"
            )));
        }
        let value: f64 = record[1]
            .parse()
            .map_err(|_| PipelineError::Config(format!("bad impact value {:?}", &record[1])))?;
        impacts.insert(record[0].to_string(), value);
    }
    Ok(impacts)
}

fn run(cli: Cli) -> Result<(), PipelineError> {
    match cli.command {
        Command::Analyze {
            input,
            schemes,
            stopwords,
            top_words,
            top_refs,
            min_token_len,
            unmatched,
            format,
        } => {
            let config = RunConfig {
                input,
                schemes,
                stopwords,
                top_words,
                top_refs,
                min_token_len,
                unmatched,
            };
            let report = cmd_analyze(&config)?;
            print!("{}", render(&report, format));
            Ok(())
        }
        Command::Delineate {
            matrix,
            seed,
            threshold,
            criterion,
            varimax,
            impacts,
            format,
        } => {
            if format != OutputFormat::Json {
                return Err(PipelineError::Config(
                    "delineate reports are JSON only".into(),
                ));
            }
            let mut config = DelineateConfig::new(matrix, seed);
            config.threshold = threshold;
            config.criterion = criterion;
            config.varimax = varimax;
            if let Some(path) = impacts {
                config.impacts = Some(load_impacts(&path)?);
            }
            let report = cmd_delineate(&config)?;
            print!("{}", render_delineation(&report));
            Ok(())
        }
        Command::Cube {
            input,
            scheme,
            stopwords,
            top_words,
            top_refs,
            min_token_len,
            unmatched,
            out,
        } => {
            let config = RunConfig {
                input,
                schemes: vec![scheme],
                stopwords,
                top_words,
                top_refs,
                min_token_len,
                unmatched,
            };
            let cube = cmd_cube(&config)?;
            cube.write_json(File::create(&out)?)?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
