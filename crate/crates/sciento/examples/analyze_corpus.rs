//! End-to-end analysis of a JSONL corpus: parse documents, build the
//! (reference, word, group) cube for each grouping scheme, and print the
//! entropy decomposition and transmission table.
//!
//! Run with: cargo run --example analyze_corpus

use std::path::PathBuf;

use sciento::pipeline::{cmd_analyze, render, OutputFormat, RunConfig};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn main() {
    let config = RunConfig::new(
        data("synth200.jsonl"),
        vec![data("schemes/blocs.tsv"), data("schemes/eu15.tsv")],
    );

    let report = match cmd_analyze(&config) {
        Ok(report) => report,
        Err(err) => {
            eprintln!("analysis failed: {err}");
            std::process::exit(err.exit_code());
        }
    };

    println!("{}", render(&report, OutputFormat::Table));

    // The same report serializes to CSV or JSON for downstream tooling.
    let json = render(&report, OutputFormat::Json);
    println!("JSON report: {} bytes", json.len());
}
