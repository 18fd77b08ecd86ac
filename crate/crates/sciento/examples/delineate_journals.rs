//! Delineate a journal set from aggregated journal-journal citations:
//! citation environment at a threshold, factor analysis of the citing
//! profiles, varimax rotation, clusters and central tendency journals.
//!
//! Run with: cargo run --example delineate_journals

use std::path::PathBuf;

use sciento::delineate::{central_tendency, principal_factors, JournalCitationMatrix};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let matrix = JournalCitationMatrix::from_path(&data("journals_demo.csv"))?;
    let seed = "BIOTECH BIOENG";

    // Journals that cite the seed, or are cited by it, for at least 1% of
    // its citation totals.
    let env = matrix.environment(seed, 0.01)?;
    println!("environment of {seed} at 1%: {} journals", env.len());
    for journal in &env {
        println!("  {journal}");
    }

    // Pearson correlations between citing profiles, then eigendecompose
    // and keep factors by the Kaiser rule (eigenvalue >= 1).
    let (names, corr) = matrix.correlation_matrix(&env)?;
    let model = principal_factors(&corr, &names, 1.0)?.rotate_varimax(1e-8, 100);

    println!("\nretained {} factors, eigenvalues:", model.factor_count());
    for (f, (lambda, share)) in model
        .eigenvalues
        .iter()
        .zip(&model.explained_variance)
        .enumerate()
    {
        println!("  factor {f}: {:.3} ({:.1}% of variance)", lambda, share * 100.0);
    }

    for factor in 0..model.factor_count() {
        let center = central_tendency(&model, factor, None)?;
        println!("\nfactor {factor} (central tendency: {center}):");
        for journal in model.cluster(factor) {
            let pos = model.journals.iter().position(|j| j == journal).unwrap();
            println!("  {:<22} loading {:+.3}", journal, model.loadings[pos][factor]);
        }
    }
    Ok(())
}
