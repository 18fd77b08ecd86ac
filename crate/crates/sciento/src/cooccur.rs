//! The three-way co-occurrence cube of (cited reference, title word,
//! group) events, with probability distributions and marginals over any
//! subset of its axes.

use std::collections::{BTreeSet, HashMap};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{assign_groups, CorpusError, CountryTable, Document};
use crate::textprep::{normalize_reference, tokenize_title, top_n, Stopwords};
use crate::GroupingScheme;

/// Tolerance for probability-sum checks.
pub const PROB_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum CubeError {
    #[error("degenerate cube: {0}")]
    Degenerate(String),
    #[error("cube total is zero")]
    ZeroTotal,
    #[error("marginal must keep at least one axis")]
    EmptyMarginal,
    #[error("axis {0:?} is not present in this distribution")]
    MissingAxis(Axis),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("invalid cube file: {0}")]
    InvalidFile(String),
    #[error("could not read or write cube: {0}")]
    Io(#[from] std::io::Error),
    #[error("cube JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// One axis of the cube: X = cited references, Y = title words,
/// Z = geographic groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Construction parameters for [`build_cube`].
#[derive(Debug, Clone)]
pub struct CubeSpec {
    pub top_refs: usize,
    pub top_words: usize,
    pub min_token_len: usize,
    pub stopwords: Stopwords,
    pub scheme: GroupingScheme,
}

impl CubeSpec {
    /// Defaults: top 250 references and words, bundled stopwords,
    /// minimum token length 2.
    pub fn new(scheme: GroupingScheme) -> Self {
        CubeSpec {
            top_refs: 250,
            top_words: 250,
            min_token_len: 2,
            stopwords: Stopwords::bundled(),
            scheme,
        }
    }
}

/// Sparse 3-way count tensor with labeled axes.
#[derive(Debug, Clone, PartialEq)]
pub struct CoocCube {
    x_labels: Vec<String>,
    y_labels: Vec<String>,
    z_labels: Vec<String>,
    counts: HashMap<(u32, u32, u32), u64>,
    total: u64,
}

impl CoocCube {
    /// Assembles a cube from explicit cells. Indices must be in bounds and
    /// counts positive.
    pub fn from_cells(
        x_labels: Vec<String>,
        y_labels: Vec<String>,
        z_labels: Vec<String>,
        cells: impl IntoIterator<Item = ((u32, u32, u32), u64)>,
    ) -> Result<Self, CubeError> {
        let mut counts: HashMap<(u32, u32, u32), u64> = HashMap::new();
        let mut total = 0u64;
        for ((x, y, z), c) in cells {
            if x as usize >= x_labels.len()
                || y as usize >= y_labels.len()
                || z as usize >= z_labels.len()
            {
                return Err(CubeError::InvalidFile(format!(
                    "cell index ({x},{y},{z}) out of bounds"
                )));
            }
            if c == 0 {
                continue;
            }
            *counts.entry((x, y, z)).or_insert(0) += c;
            total += c;
        }
        if total == 0 {
            return Err(CubeError::ZeroTotal);
        }
        Ok(CoocCube {
            x_labels,
            y_labels,
            z_labels,
            counts,
            total,
        })
    }

    pub fn x_labels(&self) -> &[String] {
        &self.x_labels
    }

    pub fn y_labels(&self) -> &[String] {
        &self.y_labels
    }

    pub fn z_labels(&self) -> &[String] {
        &self.z_labels
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of non-zero cells.
    pub fn nnz(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, x: u32, y: u32, z: u32) -> u64 {
        self.counts.get(&(x, y, z)).copied().unwrap_or(0)
    }

    pub fn cells(&self) -> impl Iterator<Item = ((u32, u32, u32), u64)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    /// Cells in canonical ascending (x, y, z) order.
    pub fn sorted_cells(&self) -> Vec<((u32, u32, u32), u64)> {
        let mut cells: Vec<_> = self.cells().collect();
        cells.sort_unstable_by_key(|&(k, _)| k);
        cells
    }

    /// Co-occurrence mass of one group slice.
    pub fn group_mass(&self, z: u32) -> u64 {
        self.counts
            .iter()
            .filter(|(&(_, _, cz), _)| cz == z)
            .map(|(_, &c)| c)
            .sum()
    }

    /// Serializes to canonical JSON: label arrays plus an ascending
    /// `[x, y, z, count]` triplet list. Byte-stable across runs.
    pub fn to_json(&self) -> String {
        let file = CubeFile {
            x_labels: self.x_labels.clone(),
            y_labels: self.y_labels.clone(),
            z_labels: self.z_labels.clone(),
            total: self.total,
            cells: self
                .sorted_cells()
                .into_iter()
                .map(|((x, y, z), c)| [x as u64, y as u64, z as u64, c])
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("cube serialization cannot fail")
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> Result<(), CubeError> {
        w.write_all(self.to_json().as_bytes())?;
        w.write_all(b"\n")?;
        Ok(())
    }

    pub fn from_json_reader<R: Read>(mut r: R) -> Result<Self, CubeError> {
        let mut text = String::new();
        r.read_to_string(&mut text)?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CubeError> {
        let file: CubeFile = serde_json::from_str(text)?;
        let cube = Self::from_cells(
            file.x_labels,
            file.y_labels,
            file.z_labels,
            file.cells.iter().map(|&[x, y, z, c]| {
                ((x as u32, y as u32, z as u32), c)
            }),
        )?;
        if cube.total != file.total {
            return Err(CubeError::InvalidFile(format!(
                "declared total {} does not match cell sum {}",
                file.total, cube.total
            )));
        }
        Ok(cube)
    }
}

#[derive(Serialize, Deserialize)]
struct CubeFile {
    x_labels: Vec<String>,
    y_labels: Vec<String>,
    z_labels: Vec<String>,
    total: u64,
    cells: Vec<[u64; 4]>,
}

/// Builds the cube: global top-N vocabularies pooled across groups, then
/// one count per (document, in-vocabulary reference, in-vocabulary word,
/// group) combination. Pair counting is binary per document.
pub fn build_cube(
    docs: &[Document],
    spec: &CubeSpec,
    table: &CountryTable,
) -> Result<CoocCube, CubeError> {
    if docs.is_empty() {
        return Err(CubeError::Degenerate("corpus is empty".into()));
    }

    // Pooled occurrence counts feeding the top-N vocabularies.
    let mut word_counts: HashMap<String, u64> = HashMap::new();
    let mut ref_counts: HashMap<String, u64> = HashMap::new();
    let mut doc_words: Vec<Vec<String>> = Vec::with_capacity(docs.len());
    let mut doc_refs: Vec<Vec<String>> = Vec::with_capacity(docs.len());
    let mut doc_groups: Vec<Vec<String>> = Vec::with_capacity(docs.len());
    let mut all_groups: BTreeSet<String> = BTreeSet::new();

    for doc in docs {
        let words: Vec<String> = tokenize_title(&doc.title, &spec.stopwords, spec.min_token_len)
            .into_iter()
            .map(|t| t.into_string())
            .collect();
        for w in &words {
            *word_counts.entry(w.clone()).or_insert(0) += 1;
        }
        let refs: Vec<String> = doc
            .references
            .iter()
            .filter_map(|r| normalize_reference(r).ok())
            .map(|k| k.into_string())
            .collect();
        for r in &refs {
            *ref_counts.entry(r.clone()).or_insert(0) += 1;
        }
        let groups = assign_groups(doc, &spec.scheme, table)?;
        all_groups.extend(groups.iter().cloned());
        doc_words.push(words);
        doc_refs.push(refs);
        doc_groups.push(groups.into_iter().collect());
    }

    if all_groups.is_empty() {
        return Err(CubeError::Degenerate(
            "no document belongs to any group under this scheme".into(),
        ));
    }

    let x_list = top_n(&ref_counts, spec.top_refs);
    let y_list = top_n(&word_counts, spec.top_words);
    if x_list.is_empty() || y_list.is_empty() {
        return Err(CubeError::Degenerate(
            "reference or title-word vocabulary is empty".into(),
        ));
    }

    let x_labels: Vec<String> = x_list.labels().map(str::to_string).collect();
    let y_labels: Vec<String> = y_list.labels().map(str::to_string).collect();
    let z_labels: Vec<String> = all_groups.into_iter().collect();
    let x_index: HashMap<&str, u32> = x_labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i as u32))
        .collect();
    let y_index: HashMap<&str, u32> = y_labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i as u32))
        .collect();
    let z_index: HashMap<&str, u32> = z_labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i as u32))
        .collect();

    let mut counts: HashMap<(u32, u32, u32), u64> = HashMap::new();
    let mut total = 0u64;
    for ((words, refs), groups) in doc_words.iter().zip(&doc_refs).zip(&doc_groups) {
        if groups.is_empty() {
            continue;
        }
        // Distinct in-vocabulary indices; duplicates within one document
        // count once.
        let xs: BTreeSet<u32> = refs
            .iter()
            .filter_map(|r| x_index.get(r.as_str()).copied())
            .collect();
        let ys: BTreeSet<u32> = words
            .iter()
            .filter_map(|w| y_index.get(w.as_str()).copied())
            .collect();
        for &x in &xs {
            for &y in &ys {
                for g in groups {
                    let z = z_index[g.as_str()];
                    *counts.entry((x, y, z)).or_insert(0) += 1;
                    total += 1;
                }
            }
        }
    }

    if total == 0 {
        return Err(CubeError::Degenerate(
            "no document contributes an in-vocabulary (reference, word) pair".into(),
        ));
    }

    Ok(CoocCube {
        x_labels,
        y_labels,
        z_labels,
        counts,
        total,
    })
}

/// A normalized distribution over one, two or three cube axes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbDist {
    axes: Vec<Axis>,
    cells: HashMap<Vec<u32>, f64>,
}

impl ProbDist {
    pub fn from_cells(
        axes: Vec<Axis>,
        cells: HashMap<Vec<u32>, f64>,
    ) -> Result<Self, CubeError> {
        if axes.is_empty() {
            return Err(CubeError::EmptyMarginal);
        }
        let sum: f64 = cells.values().sum();
        if cells.values().any(|&p| p < 0.0) {
            return Err(CubeError::InvalidFile("negative probability".into()));
        }
        if (sum - 1.0).abs() > PROB_TOL {
            return Err(CubeError::InvalidFile(format!(
                "probabilities sum to {sum}, not 1"
            )));
        }
        Ok(ProbDist { axes, cells })
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn prob(&self, key: &[u32]) -> f64 {
        self.cells.get(key).copied().unwrap_or(0.0)
    }

    pub fn cells(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.cells.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    /// Cells in ascending key order; the canonical summation order.
    pub fn sorted_cells(&self) -> Vec<(Vec<u32>, f64)> {
        let mut cells: Vec<_> = self
            .cells
            .iter()
            .map(|(k, &v)| (k.clone(), v))
            .collect();
        cells.sort_unstable_by(|(a, _), (b, _)| a.cmp(b));
        cells
    }

    pub fn sum(&self) -> f64 {
        self.cells.values().sum()
    }

    /// Sums out every axis not in `keep`. Axis order of the result follows
    /// this distribution's order.
    pub fn marginal(&self, keep: &[Axis]) -> Result<ProbDist, CubeError> {
        if keep.is_empty() {
            return Err(CubeError::EmptyMarginal);
        }
        for axis in keep {
            if !self.axes.contains(axis) {
                return Err(CubeError::MissingAxis(*axis));
            }
        }
        let positions: Vec<usize> = self
            .axes
            .iter()
            .enumerate()
            .filter(|(_, a)| keep.contains(a))
            .map(|(i, _)| i)
            .collect();
        let axes: Vec<Axis> = positions.iter().map(|&i| self.axes[i]).collect();
        // Accumulate in canonical cell order so repeated runs produce
        // bit-identical sums.
        let mut cells: HashMap<Vec<u32>, f64> = HashMap::new();
        for (key, p) in self.sorted_cells() {
            let reduced: Vec<u32> = positions.iter().map(|&i| key[i]).collect();
            *cells.entry(reduced).or_insert(0.0) += p;
        }
        Ok(ProbDist { axes, cells })
    }
}

/// Relative frequencies of the full (x, y, z) cube.
pub fn to_distribution(cube: &CoocCube) -> Result<ProbDist, CubeError> {
    if cube.total() == 0 {
        return Err(CubeError::ZeroTotal);
    }
    let total = cube.total() as f64;
    let cells: HashMap<Vec<u32>, f64> = cube
        .cells()
        .map(|((x, y, z), c)| (vec![x, y, z], c as f64 / total))
        .collect();
    Ok(ProbDist {
        axes: vec![Axis::X, Axis::Y, Axis::Z],
        cells,
    })
}
