//! Entropy and transmission analysis of distributed scientific
//! communication.
//!
//! The library quantifies how differentiated and specialized a corpus of
//! scientific publications is across geographic groups. It builds a
//! three-way co-occurrence cube of (cited reference, title word, group)
//! events, then measures:
//!
//! * **between-group entropy** (`H0 = Htot - sum p_g * H_g`), the Theil
//!   dividedness of the groups, with its `%H0` normalization;
//! * **transmission values** (`Txy`, `Txz`, `Tyz`, `Txyz`), the mutual
//!   information among the reference, word and group distributions.
//!
//! A separate subsystem delineates a journal set from aggregated
//! journal-journal citations: seed environment at a threshold, factor
//! analysis of the correlation matrix, optional varimax rotation, and the
//! central tendency journal per factor.
//!
//! Start with the runnable programs in `examples/`, or with
//! [`pipeline::cmd_analyze`] for the end-to-end chain. The `sciento`
//! binary exposes the same chain as `analyze`, `cube` and `delineate`
//! subcommands.

pub mod cooccur;
pub mod corpus;
pub mod delineate;
pub mod entropy;
pub mod pipeline;
pub mod textprep;

pub use cooccur::{build_cube, to_distribution, Axis, CoocCube, CubeSpec, ProbDist};
pub use corpus::{
    assign_groups, extract_countries, parse_corpus, CountryCode, CountryTable, Document,
    GroupingScheme, UnmatchedPolicy,
};
pub use delineate::{
    central_tendency, principal_factors, varimax, FactorModel, JournalCitationMatrix,
};
pub use entropy::{
    decompose, shannon_entropy, transmissions, EntropyDecomposition, TransmissionReport,
};
pub use pipeline::{
    cmd_analyze, cmd_delineate, render, AnalysisReport, OutputFormat, PipelineError, RunConfig,
};
pub use textprep::{normalize_reference, tokenize_title, top_n, FrequencyList, Stopwords};
