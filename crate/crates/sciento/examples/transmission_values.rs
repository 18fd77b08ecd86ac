//! Compute the seven marginal/joint entropies of the cube and the four
//! transmission (mutual information) values derived from them.
//!
//! Run with: cargo run --example transmission_values

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use sciento::cooccur::{build_cube, CubeSpec};
use sciento::corpus::{parse_corpus, CountryTable, GroupingScheme};
use sciento::entropy::transmissions;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let docs = parse_corpus(BufReader::new(File::open(data("synth200.jsonl"))?))?;
    let spec = CubeSpec::new(GroupingScheme::bundled_blocs());
    let cube = build_cube(&docs, &spec, &CountryTable::bundled())?;
    let t = transmissions(&cube)?;

    println!("marginal and joint entropies (bits):");
    println!("  Hx   = {:.4}  (cited references)", t.h_x);
    println!("  Hy   = {:.4}  (title words)", t.h_y);
    println!("  Hz   = {:.4}  (groups)", t.h_z);
    println!("  Hxy  = {:.4}", t.h_xy);
    println!("  Hxz  = {:.4}", t.h_xz);
    println!("  Hyz  = {:.4}", t.h_yz);
    println!("  Hxyz = {:.4}", t.h_xyz);

    println!("\ntransmissions:");
    println!("  Txy  = Hx + Hy - Hxy        = {:.4}", t.t_xy);
    println!("  Txz  = Hx + Hz - Hxz        = {:.4}", t.t_xz);
    println!("  Tyz  = Hy + Hz - Hyz        = {:.4}", t.t_yz);
    println!("  Txyz = Hx + Hy + Hz - Hxyz  = {:.4}", t.t_xyz);

    // Transmissions are non-negative and each pairwise T is bounded by
    // the smaller of its two marginals.
    assert!(t.t_xy >= 0.0 && t.t_xy <= t.h_x.min(t.h_y) + 1e-9);
    assert!(t.t_xyz >= t.t_xy.max(t.t_xz).max(t.t_yz) - 1e-9);
    println!("\nall information inequalities hold");
    Ok(())
}
