//! Title tokenization, cited-reference normalization and top-N frequency
//! lists: the two indicator vocabularies of a corpus.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TextError {
    #[error("reference string is empty after normalization")]
    EmptyReference,
    #[error("could not read stopword file: {0}")]
    Io(#[from] std::io::Error),
}

/// A normalized title word: lowercase, no whitespace, not a stopword.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Token(String);

impl Token {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A canonical cited-reference string: uppercase, single-spaced, no
/// trailing punctuation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReferenceKey(String);

impl ReferenceKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for ReferenceKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The active stopword set for title tokenization.
#[derive(Debug, Clone)]
pub struct Stopwords(HashSet<String>);

impl Stopwords {
    /// The ~120-word English list shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(include_str!("../data/stopwords.txt"))
    }

    pub fn empty() -> Self {
        Stopwords(HashSet::new())
    }

    /// One word per line, `#` starts a comment. Words are lowercased.
    pub fn parse(text: &str) -> Self {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        Stopwords(words)
    }

    pub fn from_path(path: &Path) -> Result<Self, TextError> {
        Ok(Self::parse(&std::fs::read_to_string(path)?))
    }

    pub fn from_words<I: IntoIterator<Item = S>, S: Into<String>>(words: I) -> Self {
        Stopwords(words.into_iter().map(|w| w.into().to_lowercase()).collect())
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Default for Stopwords {
    fn default() -> Self {
        Self::bundled()
    }
}

/// Lowercases the title, splits on any character outside letters, digits
/// and hyphen, and drops tokens shorter than `min_len` or in the stopword
/// set. Duplicates are preserved in order.
pub fn tokenize_title(title: &str, stopwords: &Stopwords, min_len: usize) -> Vec<Token> {
    assert!(min_len >= 1, "min_len must be at least 1");
    title
        .to_lowercase()
        .split(|c: char| !(c.is_alphanumeric() || c == '-'))
        .filter(|t| t.chars().count() >= min_len && !stopwords.contains(t))
        .map(|t| Token(t.to_string()))
        .collect()
}

/// Uppercases, trims, collapses whitespace runs and strips trailing
/// punctuation. Inputs that leave nothing behind are an error.
pub fn normalize_reference(raw: &str) -> Result<ReferenceKey, TextError> {
    let collapsed = raw
        .trim()
        .to_uppercase()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ");
    let key = collapsed.trim_end_matches(|c: char| c.is_ascii_punctuation());
    let key = key.trim_end();
    if key.is_empty() {
        return Err(TextError::EmptyReference);
    }
    Ok(ReferenceKey(key.to_string()))
}

/// An ordered top-N frequency list. Counts are non-increasing; ties break
/// by ascending label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyList {
    items: Vec<(String, u64)>,
    n: usize,
}

impl FrequencyList {
    pub fn items(&self) -> &[(String, u64)] {
        &self.items
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.items.iter().map(|(l, _)| l.as_str())
    }

    pub fn requested(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// The `n` most frequent labels, deterministic under the FrequencyList
/// ordering.
pub fn top_n(counts: &HashMap<String, u64>, n: usize) -> FrequencyList {
    let mut items: Vec<(String, u64)> = counts
        .iter()
        .map(|(label, &count)| (label.clone(), count))
        .collect();
    items.sort_unstable_by(|(la, ca), (lb, cb)| cb.cmp(ca).then_with(|| la.cmp(lb)));
    items.truncate(n);
    FrequencyList { items, n }
}
