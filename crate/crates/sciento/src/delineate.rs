//! Journal citation environments and their factor structure: delineating
//! a specialty from aggregated journal-journal citations, clustering the
//! environment by factor analysis, and picking the central tendency
//! journal of a cluster.

use std::collections::{BTreeSet, HashMap};
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const JACOBI_OFFDIAG_TOL: f64 = 1e-10;
const JACOBI_MAX_SWEEPS: usize = 100;
const SYMMETRY_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum DelineateError {
    #[error("journal {0:?} is not in the matrix")]
    UnknownJournal(String),
    #[error("journal {0:?} has no citations in either direction")]
    ZeroTotals(String),
    #[error("threshold must be in (0, 1], got {0}")]
    BadThreshold(f64),
    #[error("environment needs at least two journals, got {0}")]
    EnvironmentTooSmall(usize),
    #[error("matrix is not symmetric within {SYMMETRY_TOL}")]
    NotSymmetric,
    #[error("no eigenvalue reaches the retention criterion {criterion}; largest is {largest:.4} - try a lower criterion")]
    NoFactorRetained { criterion: f64, largest: f64 },
    #[error("factor index {0} is out of range ({1} retained)")]
    FactorOutOfRange(usize, usize),
    #[error("invalid citation matrix: {0}")]
    InvalidMatrix(String),
    #[error("could not read matrix: {0}")]
    Io(#[from] std::io::Error),
    #[error("matrix CSV: {0}")]
    Csv(#[from] csv::Error),
}

/// Aggregated journal-journal citations; entry (i, j) counts citations
/// from journal i (citing) to journal j (cited).
#[derive(Debug, Clone)]
pub struct JournalCitationMatrix {
    journals: Vec<String>,
    counts: Vec<Vec<u64>>,
    index: HashMap<String, usize>,
}

impl JournalCitationMatrix {
    pub fn new(journals: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self, DelineateError> {
        let n = journals.len();
        if counts.len() != n || counts.iter().any(|row| row.len() != n) {
            return Err(DelineateError::InvalidMatrix(format!(
                "expected a {n}x{n} count matrix"
            )));
        }
        let index: HashMap<String, usize> = journals
            .iter()
            .enumerate()
            .map(|(i, j)| (j.clone(), i))
            .collect();
        if index.len() != n {
            return Err(DelineateError::InvalidMatrix(
                "duplicate journal name".into(),
            ));
        }
        Ok(JournalCitationMatrix {
            journals,
            counts,
            index,
        })
    }

    /// Reads a CSV with a header row of journal names (first cell blank or
    /// a corner label) and one row per citing journal.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self, DelineateError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header: Vec<String> = rdr
            .headers()?
            .iter()
            .skip(1)
            .map(str::to_string)
            .collect();
        let n = header.len();
        let mut journals = Vec::with_capacity(n);
        let mut counts = Vec::with_capacity(n);
        for record in rdr.records() {
            let record = record?;
            if record.len() != n + 1 {
                return Err(DelineateError::InvalidMatrix(format!(
                    "row {:?} has {} cells, expected {}",
                    record.get(0).unwrap_or(""),
                    record.len(),
                    n + 1
                )));
            }
            let name = record.get(0).unwrap().to_string();
            let mut row = Vec::with_capacity(n);
            for cell in record.iter().skip(1) {
                let value: u64 = cell.parse().map_err(|_| {
                    DelineateError::InvalidMatrix(format!(
                        "row {name:?}: cell {cell:?} is not a non-negative integer"
                    ))
                })?;
                row.push(value);
            }
            journals.push(name);
            counts.push(row);
        }
        if journals != header {
            return Err(DelineateError::InvalidMatrix(
                "row names do not match the header column names".into(),
            ));
        }
        Self::new(journals, counts)
    }

    pub fn from_path(path: &Path) -> Result<Self, DelineateError> {
        Self::from_csv(std::fs::File::open(path)?)
    }

    pub fn journals(&self) -> &[String] {
        &self.journals
    }

    pub fn len(&self) -> usize {
        self.journals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.journals.is_empty()
    }

    pub fn count(&self, citing: usize, cited: usize) -> u64 {
        self.counts[citing][cited]
    }

    fn index_of(&self, journal: &str) -> Result<usize, DelineateError> {
        self.index
            .get(journal)
            .copied()
            .ok_or_else(|| DelineateError::UnknownJournal(journal.to_string()))
    }

    /// The citation environment of a seed journal: every journal that
    /// cites the seed for at least `threshold` of the citations the seed
    /// receives, or is cited by it for at least `threshold` of the
    /// citations it gives. The seed itself is always included.
    pub fn environment(
        &self,
        seed: &str,
        threshold: f64,
    ) -> Result<BTreeSet<String>, DelineateError> {
        if !(threshold > 0.0 && threshold <= 1.0) {
            return Err(DelineateError::BadThreshold(threshold));
        }
        let s = self.index_of(seed)?;
        let given: u64 = self.counts[s].iter().sum();
        let received: u64 = self.counts.iter().map(|row| row[s]).sum();
        if given == 0 && received == 0 {
            return Err(DelineateError::ZeroTotals(seed.to_string()));
        }
        let mut env = BTreeSet::new();
        env.insert(self.journals[s].clone());
        for (j, name) in self.journals.iter().enumerate() {
            let cites_seed = self.counts[j][s];
            let cited_by_seed = self.counts[s][j];
            let in_hit = cites_seed > 0 && cites_seed as f64 >= threshold * received as f64;
            let out_hit = cited_by_seed > 0 && cited_by_seed as f64 >= threshold * given as f64;
            if in_hit || out_hit {
                env.insert(name.clone());
            }
        }
        Ok(env)
    }

    /// Pearson correlations between the citing-profile rows of the
    /// environment journals, restricted to environment columns. Rows with
    /// zero variance correlate 0 with everything and 1 with themselves.
    pub fn correlation_matrix(
        &self,
        env: &BTreeSet<String>,
    ) -> Result<(Vec<String>, Vec<Vec<f64>>), DelineateError> {
        if env.len() < 2 {
            return Err(DelineateError::EnvironmentTooSmall(env.len()));
        }
        let mut indices = Vec::with_capacity(env.len());
        for name in env {
            indices.push(self.index_of(name)?);
        }
        let names: Vec<String> = indices.iter().map(|&i| self.journals[i].clone()).collect();

        let n = indices.len();
        let profiles: Vec<Vec<f64>> = indices
            .iter()
            .map(|&i| indices.iter().map(|&j| self.counts[i][j] as f64).collect())
            .collect();
        let means: Vec<f64> = profiles
            .iter()
            .map(|row| row.iter().sum::<f64>() / n as f64)
            .collect();
        let sds: Vec<f64> = profiles
            .iter()
            .zip(&means)
            .map(|(row, &m)| {
                row.iter().map(|&v| (v - m) * (v - m)).sum::<f64>().sqrt()
            })
            .collect();

        let mut corr = vec![vec![0.0; n]; n];
        for i in 0..n {
            corr[i][i] = 1.0;
            for k in (i + 1)..n {
                let value = if sds[i] == 0.0 || sds[k] == 0.0 {
                    0.0
                } else {
                    let cov: f64 = profiles[i]
                        .iter()
                        .zip(&profiles[k])
                        .map(|(&a, &b)| (a - means[i]) * (b - means[k]))
                        .sum();
                    cov / (sds[i] * sds[k])
                };
                corr[i][k] = value;
                corr[k][i] = value;
            }
        }
        Ok((names, corr))
    }
}

/// Factor loadings, eigenvalues and cluster assignment of a correlation
/// matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorModel {
    pub journals: Vec<String>,
    /// journals x factors; factor columns ordered by descending eigenvalue.
    pub loadings: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
    pub explained_variance: Vec<f64>,
    /// Per journal, the retained factor where |loading| is maximal.
    pub assignment: Vec<usize>,
}

impl FactorModel {
    pub fn factor_count(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Journals assigned to one factor.
    pub fn cluster(&self, factor: usize) -> Vec<&str> {
        self.journals
            .iter()
            .zip(&self.assignment)
            .filter(|(_, &a)| a == factor)
            .map(|(j, _)| j.as_str())
            .collect()
    }

    /// Applies varimax rotation to the loadings and re-derives signs and
    /// assignment. Extraction eigenvalues are kept as-is.
    pub fn rotate_varimax(mut self, tol: f64, max_sweeps: usize) -> FactorModel {
        self.loadings = varimax(&self.loadings, tol, max_sweeps);
        fix_signs(&mut self.loadings);
        self.assignment = assign(&self.loadings);
        self
    }
}

/// Full symmetric eigendecomposition by cyclic Jacobi rotations.
/// Returns (eigenvalues, eigenvectors as columns), unsorted.
fn jacobi_eigen(matrix: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = matrix.len();
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[p][q].abs());
            }
        }
        if off < JACOBI_OFFDIAG_TOL {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < JACOBI_OFFDIAG_TOL * 1e-2 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..n {
                    let aip = a[i][p];
                    let aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for j in 0..n {
                    let apj = a[p][j];
                    let aqj = a[q][j];
                    a[p][j] = c * apj - s * aqj;
                    a[q][j] = s * apj + c * aqj;
                }
                for i in 0..n {
                    let vip = v[i][p];
                    let viq = v[i][q];
                    v[i][p] = c * vip - s * viq;
                    v[i][q] = s * vip + c * viq;
                }
            }
        }
    }
    let eigenvalues: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    (eigenvalues, v)
}

fn fix_signs(loadings: &mut [Vec<f64>]) {
    if loadings.is_empty() {
        return;
    }
    let factors = loadings[0].len();
    for f in 0..factors {
        let mut best = 0.0f64;
        let mut best_val = 0.0f64;
        for row in loadings.iter() {
            if row[f].abs() > best {
                best = row[f].abs();
                best_val = row[f];
            }
        }
        if best_val < 0.0 {
            for row in loadings.iter_mut() {
                row[f] = -row[f];
            }
        }
    }
}

fn assign(loadings: &[Vec<f64>]) -> Vec<usize> {
    loadings
        .iter()
        .map(|row| {
            let mut best = 0usize;
            for (f, &l) in row.iter().enumerate() {
                if l.abs() > row[best].abs() {
                    best = f;
                }
            }
            best
        })
        .collect()
}

/// Eigendecomposes a correlation matrix and retains factors whose
/// eigenvalue meets `criterion` (Kaiser rule at the default 1.0).
/// Loadings are eigenvector * sqrt(eigenvalue) with each factor's
/// largest-magnitude loading made positive.
pub fn principal_factors(
    corr: &[Vec<f64>],
    journals: &[String],
    criterion: f64,
) -> Result<FactorModel, DelineateError> {
    let n = corr.len();
    if n == 0 || corr.iter().any(|row| row.len() != n) || journals.len() != n {
        return Err(DelineateError::InvalidMatrix(
            "correlation matrix and journal list sizes disagree".into(),
        ));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (corr[i][j] - corr[j][i]).abs() > SYMMETRY_TOL {
                return Err(DelineateError::NotSymmetric);
            }
        }
    }

    let (eigenvalues, vectors) = jacobi_eigen(corr);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eigenvalues[b]
            .partial_cmp(&eigenvalues[a])
            .expect("eigenvalues are finite")
    });

    let retained: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&i| eigenvalues[i] >= criterion)
        .collect();
    if retained.is_empty() {
        return Err(DelineateError::NoFactorRetained {
            criterion,
            largest: order.first().map(|&i| eigenvalues[i]).unwrap_or(f64::NAN),
        });
    }

    let trace: f64 = eigenvalues.iter().sum();
    let kept_eigenvalues: Vec<f64> = retained.iter().map(|&i| eigenvalues[i]).collect();
    let explained_variance: Vec<f64> = kept_eigenvalues
        .iter()
        .map(|&l| if trace > 0.0 { l / trace } else { 0.0 })
        .collect();

    let mut loadings: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            retained
                .iter()
                .map(|&i| vectors[j][i] * eigenvalues[i].max(0.0).sqrt())
                .collect()
        })
        .collect();
    fix_signs(&mut loadings);
    let assignment = assign(&loadings);

    Ok(FactorModel {
        journals: journals.to_vec(),
        loadings,
        eigenvalues: kept_eigenvalues,
        explained_variance,
        assignment,
    })
}

/// The varimax criterion: per factor, the variance of squared loadings.
pub fn varimax_criterion(loadings: &[Vec<f64>]) -> f64 {
    if loadings.is_empty() {
        return 0.0;
    }
    let n = loadings.len() as f64;
    let factors = loadings[0].len();
    (0..factors)
        .map(|f| {
            let sq: Vec<f64> = loadings.iter().map(|row| row[f] * row[f]).collect();
            let mean = sq.iter().sum::<f64>() / n;
            sq.iter().map(|&s| (s - mean) * (s - mean)).sum::<f64>() / n
        })
        .sum()
}

/// Orthogonal varimax rotation by pairwise planar rotations, swept until
/// the criterion improves by less than `tol` or `max_sweeps` is reached.
/// A single-factor matrix is returned unchanged.
pub fn varimax(loadings: &[Vec<f64>], tol: f64, max_sweeps: usize) -> Vec<Vec<f64>> {
    let mut a: Vec<Vec<f64>> = loadings.to_vec();
    if a.is_empty() || a[0].len() < 2 {
        return a;
    }
    let n = a.len() as f64;
    let factors = a[0].len();
    let mut last = varimax_criterion(&a);
    for _ in 0..max_sweeps {
        for p in 0..factors {
            for q in (p + 1)..factors {
                // Planar angle maximizing the criterion for this pair.
                let (mut su, mut sv, mut suv, mut su2v2) = (0.0f64, 0.0, 0.0, 0.0);
                for row in &a {
                    let u = row[p] * row[p] - row[q] * row[q];
                    let v = 2.0 * row[p] * row[q];
                    su += u;
                    sv += v;
                    suv += u * v;
                    su2v2 += u * u - v * v;
                }
                let num = 2.0 * (suv - su * sv / n);
                let den = su2v2 - (su * su - sv * sv) / n;
                if num.abs() < 1e-15 && den.abs() < 1e-15 {
                    continue;
                }
                let angle = num.atan2(den) / 4.0;
                if angle.abs() < 1e-15 {
                    continue;
                }
                let (s, c) = angle.sin_cos();
                for row in a.iter_mut() {
                    let lp = row[p];
                    let lq = row[q];
                    row[p] = c * lp + s * lq;
                    row[q] = -s * lp + c * lq;
                }
            }
        }
        let current = varimax_criterion(&a);
        if current - last < tol {
            break;
        }
        last = current;
    }
    a
}

/// The journal with maximal |loading| on a factor. Ties break by higher
/// impact value when provided, else by ascending journal name.
pub fn central_tendency<'a>(
    model: &'a FactorModel,
    factor: usize,
    impacts: Option<&HashMap<String, f64>>,
) -> Result<&'a str, DelineateError> {
    if factor >= model.factor_count() {
        return Err(DelineateError::FactorOutOfRange(
            factor,
            model.factor_count(),
        ));
    }
    const TIE_TOL: f64 = 1e-12;
    let mut best: Option<usize> = None;
    for (j, row) in model.loadings.iter().enumerate() {
        let candidate = row[factor].abs();
        match best {
            None => best = Some(j),
            Some(b) => {
                let incumbent = model.loadings[b][factor].abs();
                if candidate > incumbent + TIE_TOL {
                    best = Some(j);
                } else if (candidate - incumbent).abs() <= TIE_TOL {
                    let impact = |i: usize| {
                        impacts
                            .and_then(|m| m.get(&model.journals[i]).copied())
                            .unwrap_or(f64::NEG_INFINITY)
                    };
                    let (ci, bi) = (impact(j), impact(b));
                    if ci > bi || (ci == bi && model.journals[j] < model.journals[b]) {
                        best = Some(j);
                    }
                }
            }
        }
    }
    let b = best.expect("model has at least one journal");
    Ok(&model.journals[b])
}
