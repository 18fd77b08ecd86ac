//! Build the sparse three-way co-occurrence cube by hand and inspect its
//! axes, cells and marginal distributions.
//!
//! Run with: cargo run --example cube_and_marginals

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use sciento::cooccur::{build_cube, to_distribution, Axis, CubeSpec};
use sciento::corpus::{parse_corpus, CountryTable, GroupingScheme};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let docs = parse_corpus(BufReader::new(File::open(data("toy3.jsonl"))?))?;
    println!("parsed {} documents", docs.len());

    // X = cited references, Y = title words, Z = bloc (EU / Japan / USA).
    let spec = CubeSpec::new(GroupingScheme::bundled_blocs());
    let cube = build_cube(&docs, &spec, &CountryTable::bundled())?;

    println!(
        "cube: {} refs x {} words x {} groups, {} events in {} nonzero cells",
        cube.x_labels().len(),
        cube.y_labels().len(),
        cube.z_labels().len(),
        cube.total(),
        cube.nnz(),
    );
    for ((x, y, z), count) in cube.sorted_cells() {
        println!(
            "  {:>2} | {:<28} {:<10} {:<4} ",
            count,
            cube.x_labels()[x as usize],
            cube.y_labels()[y as usize],
            cube.z_labels()[z as usize],
        );
    }

    // Normalize to probabilities and collapse axes.
    let dist = to_distribution(&cube)?;
    let by_group = dist.marginal(&[Axis::Z])?;
    println!("\ngroup shares:");
    for (key, p) in by_group.sorted_cells() {
        println!("  {:<6} {:.3}", cube.z_labels()[key[0] as usize], p);
    }

    let words_by_group = dist.marginal(&[Axis::Y, Axis::Z])?;
    println!("\nword x group probabilities:");
    for (key, p) in words_by_group.sorted_cells() {
        println!(
            "  {:<10} {:<4} {:.3}",
            cube.y_labels()[key[0] as usize],
            cube.z_labels()[key[1] as usize],
            p
        );
    }

    // The canonical JSON form round-trips losslessly.
    let json = cube.to_json();
    println!("\ncanonical JSON: {} bytes", json.len());
    Ok(())
}
