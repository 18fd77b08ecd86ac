//! Bibliographic records, country extraction from institutional addresses,
//! and country-to-group mapping.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::io::BufRead;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Group label used by [`UnmatchedPolicy::OtherBucket`].
pub const OTHER_GROUP: &str = "OTHER";

/// One bibliographic record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub year: i32,
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub journal: String,
    #[serde(default)]
    pub addresses: Vec<String>,
    #[serde(default)]
    pub references: Vec<String>,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: malformed record: {source}")]
    Malformed {
        line: usize,
        source: serde_json::Error,
    },
    #[error("line {line}: duplicate document id {id:?}")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: document id is empty")]
    EmptyId { line: usize },
    #[error("could not read input: {0}")]
    Io(#[from] std::io::Error),
    #[error("{file}:{line}: invalid table entry: {reason}")]
    Table {
        file: String,
        line: usize,
        reason: String,
    },
    #[error("country {0} is not covered by grouping scheme {1:?}")]
    UnmatchedCountry(CountryCode, String),
}

/// ISO-3166 alpha-2 country code.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CountryCode([u8; 2]);

impl CountryCode {
    /// Accepts exactly two uppercase ASCII letters.
    pub fn new(code: &str) -> Option<Self> {
        let b = code.as_bytes();
        if b.len() == 2 && b.iter().all(u8::is_ascii_uppercase) {
            Some(CountryCode([b[0], b[1]]))
        } else {
            None
        }
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.0).expect("codes are ASCII")
    }
}

impl fmt::Display for CountryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for CountryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CountryCode({})", self.as_str())
    }
}

impl FromStr for CountryCode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CountryCode::new(s).ok_or_else(|| format!("{s:?} is not a two-letter uppercase code"))
    }
}

/// Country-name aliases as they appear in the final segment of an
/// institutional address, mapped to country codes.
#[derive(Debug, Clone)]
pub struct CountryTable {
    aliases: HashMap<String, CountryCode>,
}

impl CountryTable {
    /// The table shipped with the crate, covering SCI-style address endings.
    pub fn bundled() -> Self {
        Self::parse(include_str!("../data/countries.tsv"), "<bundled>")
            .expect("bundled country table is valid")
    }

    /// Parses `ALIAS<TAB>CODE` lines; `#` starts a comment.
    pub fn parse(text: &str, file: &str) -> Result<Self, CorpusError> {
        let mut aliases = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let entry = |reason: String| CorpusError::Table {
                file: file.to_string(),
                line: idx + 1,
                reason,
            };
            let (alias, code) = line
                .split_once('\t')
                .ok_or_else(|| entry("expected ALIAS<TAB>CODE".into()))?;
            let alias = alias.trim().to_uppercase();
            if alias.is_empty() {
                return Err(entry("empty alias".into()));
            }
            let code = CountryCode::new(code.trim())
                .ok_or_else(|| entry(format!("bad country code {:?}", code.trim())))?;
            aliases.insert(alias, code);
        }
        Ok(CountryTable { aliases })
    }

    pub fn from_path(path: &Path) -> Result<Self, CorpusError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn lookup(&self, name: &str) -> Option<CountryCode> {
        self.aliases.get(&name.trim().to_uppercase()).copied()
    }
}

impl Default for CountryTable {
    fn default() -> Self {
        Self::bundled()
    }
}

/// How [`assign_groups`] treats countries outside a scheme's mapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnmatchedPolicy {
    /// Silently ignore the country.
    Drop,
    /// Fail, naming the country.
    Error,
    /// Collect into the [`OTHER_GROUP`] bucket.
    OtherBucket,
}

impl FromStr for UnmatchedPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "drop" => Ok(Self::Drop),
            "error" => Ok(Self::Error),
            "other" | "other-bucket" => Ok(Self::OtherBucket),
            _ => Err(format!("unknown policy {s:?}; use drop, error or other")),
        }
    }
}

/// Maps country codes to the group labels of one analysis level
/// (e.g. member states, or the EU/Japan/USA blocs).
#[derive(Debug, Clone)]
pub struct GroupingScheme {
    pub name: String,
    mapping: BTreeMap<CountryCode, String>,
    pub unmatched: UnmatchedPolicy,
}

impl GroupingScheme {
    /// Parses `CODE<TAB>LABEL` lines; `#` starts a comment.
    pub fn parse(name: &str, text: &str) -> Result<Self, CorpusError> {
        let mut mapping = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let entry = |reason: String| CorpusError::Table {
                file: name.to_string(),
                line: idx + 1,
                reason,
            };
            let (code, label) = line
                .split_once('\t')
                .ok_or_else(|| entry("expected CODE<TAB>LABEL".into()))?;
            let code = CountryCode::new(code.trim())
                .ok_or_else(|| entry(format!("bad country code {:?}", code.trim())))?;
            let label = label.trim();
            if label.is_empty() {
                return Err(entry("empty group label".into()));
            }
            mapping.insert(code, label.to_string());
        }
        Ok(GroupingScheme {
            name: name.to_string(),
            mapping,
            unmatched: UnmatchedPolicy::Drop,
        })
    }

    pub fn from_path(path: &Path) -> Result<Self, CorpusError> {
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let text = std::fs::read_to_string(path)?;
        Self::parse(&name, &text)
    }

    /// Global system: EU, Japan and USA blocs.
    pub fn bundled_blocs() -> Self {
        Self::parse("blocs", include_str!("../data/schemes/blocs.tsv"))
            .expect("bundled scheme is valid")
    }

    /// European system: the 15 EU member states.
    pub fn bundled_eu15() -> Self {
        Self::parse("eu15", include_str!("../data/schemes/eu15.tsv"))
            .expect("bundled scheme is valid")
    }

    pub fn with_policy(mut self, policy: UnmatchedPolicy) -> Self {
        self.unmatched = policy;
        self
    }

    pub fn group_of(&self, code: CountryCode) -> Option<&str> {
        self.mapping.get(&code).map(String::as_str)
    }

    /// All group labels in the codomain, sorted and deduplicated.
    pub fn groups(&self) -> BTreeSet<&str> {
        self.mapping.values().map(String::as_str).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }
}

/// Reads a JSONL corpus: one document object per line, blank lines ignored.
pub fn parse_corpus<R: BufRead>(reader: R) -> Result<Vec<Document>, CorpusError> {
    let mut docs = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let doc: Document = serde_json::from_str(&line).map_err(|source| {
            CorpusError::Malformed {
                line: idx + 1,
                source,
            }
        })?;
        if doc.id.is_empty() {
            return Err(CorpusError::EmptyId { line: idx + 1 });
        }
        if !seen.insert(doc.id.clone()) {
            return Err(CorpusError::DuplicateId {
                line: idx + 1,
                id: doc.id,
            });
        }
        docs.push(doc);
    }
    Ok(docs)
}

/// Recognizes countries in one address by looking up its final
/// comma-separated segment in the table. Unrecognized segments yield an
/// empty list.
pub fn extract_countries(address: &str, table: &CountryTable) -> Vec<CountryCode> {
    let Some(last) = address.rsplit(',').next() else {
        return Vec::new();
    };
    let segment = last.trim().trim_end_matches('.');
    table.lookup(segment).into_iter().collect()
}

/// The set of groups a document belongs to under a scheme: the union over
/// all countries of all its addresses (whole counting).
pub fn assign_groups(
    doc: &Document,
    scheme: &GroupingScheme,
    table: &CountryTable,
) -> Result<BTreeSet<String>, CorpusError> {
    let mut groups = BTreeSet::new();
    for address in &doc.addresses {
        for code in extract_countries(address, table) {
            match scheme.group_of(code) {
                Some(label) => {
                    groups.insert(label.to_string());
                }
                None => match scheme.unmatched {
                    UnmatchedPolicy::Drop => {}
                    UnmatchedPolicy::OtherBucket => {
                        groups.insert(OTHER_GROUP.to_string());
                    }
                    UnmatchedPolicy::Error => {
                        return Err(CorpusError::UnmatchedCountry(code, scheme.name.clone()));
                    }
                },
            }
        }
    }
    Ok(groups)
}
