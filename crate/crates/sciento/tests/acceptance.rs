//! Acceptance suite. Each test prints one `ACCEPTANCE n <name>: PASS|FAIL`
//! line (visible with `cargo test --test acceptance -- --nocapture`) and
//! fails the build when its criterion is not met.

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use sciento::cooccur::{build_cube, CoocCube, CubeSpec};
use sciento::corpus::{parse_corpus, CountryTable, Document, GroupingScheme};
use sciento::delineate::{principal_factors, JournalCitationMatrix};
use sciento::entropy::{decompose, transmissions, EntropyDecomposition, TransmissionReport};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn report(n: usize, name: &str, failures: &[String]) {
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {n} {name}: {verdict}");
    assert!(failures.is_empty(), "criterion {n} violations:\n{}", failures.join("\n"));
}

/// Published reference panel: marginal/joint entropies (bits, two
/// decimals) and the four transmission values for one corpus slice.
/// Order: sigma_h, h_xyz, h_xy, h_xz, h_yz, h_x, h_y, h_z,
///        t_xy, t_xz, t_yz, t_xyz.
const PANELS: [(&str, [f64; 12]); 18] = [
    ("AI-1988-G", [10.04, 10.82, 10.72, 7.98, 6.95, 7.61, 6.59, 0.77, 3.47, 0.40, 0.41, 4.15]),
    ("AI-1988-EU", [6.21, 8.18, 8.17, 6.41, 5.19, 6.30, 4.90, 1.97, 3.03, 1.86, 1.68, 4.99]),
    ("INFO-1986-G", [9.72, 10.54, 10.37, 7.46, 6.41, 7.01, 5.87, 0.82, 2.51, 0.37, 0.28, 3.16]),
    ("INFO-1986-EU", [6.95, 8.70, 8.53, 6.37, 5.73, 5.86, 5.04, 1.75, 2.37, 1.24, 1.05, 3.95]),
    ("BIO-1986-G", [10.22, 11.56, 11.32, 8.15, 8.00, 7.27, 7.06, 1.35, 3.01, 0.46, 0.40, 4.12]),
    ("BIO-1986-EU", [7.84, 10.74, 10.40, 8.21, 8.35, 6.86, 6.83, 2.90, 3.29, 1.55, 1.38, 5.85]),
    ("AI-1992-G", [10.16, 11.20, 11.12, 8.40, 6.99, 7.72, 6.45, 1.04, 3.05, 0.37, 0.50, 4.01]),
    ("AI-1992-EU", [6.87, 9.81, 9.61, 7.57, 7.57, 6.97, 5.70, 2.94, 3.06, 2.33, 1.07, 5.80]),
    ("INFO-1992-G", [10.44, 11.38, 11.28, 7.89, 7.25, 7.46, 6.62, 0.94, 2.80, 0.51, 0.31, 3.64]),
    ("INFO-1992-EU", [7.85, 10.16, 9.98, 7.35, 7.24, 6.67, 6.43, 2.32, 3.12, 1.63, 1.51, 5.25]),
    ("BIO-1992-G", [10.67, 11.87, 11.70, 8.45, 8.04, 7.84, 7.13, 1.21, 3.27, 0.60, 0.30, 4.30]),
    ("BIO-1992-EU", [8.32, 11.40, 11.20, 8.45, 8.59, 7.57, 6.98, 3.08, 3.36, 2.20, 1.48, 6.23]),
    ("AI-1997-G", [10.05, 11.16, 10.90, 7.96, 7.69, 7.22, 6.93, 1.12, 3.25, 0.37, 0.36, 4.11]),
    ("AI-1997-EU", [7.40, 10.33, 10.03, 7.91, 7.75, 6.86, 6.51, 2.94, 3.34, 1.88, 1.69, 5.98]),
    ("INFO-1996-G", [10.62, 11.62, 11.48, 8.39, 7.11, 7.90, 6.43, 1.00, 2.85, 0.52, 0.32, 3.72]),
    ("INFO-1996-EU", [7.71, 10.55, 10.41, 8.05, 7.30, 7.39, 6.22, 2.84, 3.20, 2.18, 1.76, 5.89]),
    ("BIO-1996-G", [11.44, 12.67, 12.51, 8.79, 8.39, 8.02, 7.36, 1.23, 2.86, 0.46, 0.20, 3.94]),
    ("BIO-1996-EU", [8.81, 12.23, 11.95, 9.19, 9.46, 7.79, 7.29, 3.42, 3.14, 2.02, 1.25, 6.27]),
];

/// Published decomposition summary rows: Htot, sigma_h, H0, %H0.
const SUMMARY: [(&str, [f64; 4]); 18] = [
    ("AI-1988-G", [10.82, 10.04, 0.78, 7.21]),
    ("AI-1988-EU", [8.18, 6.21, 1.97, 24.08]),
    ("AI-1992-G", [11.20, 10.16, 1.04, 9.29]),
    ("AI-1992-EU", [9.81, 6.87, 2.94, 29.97]),
    ("AI-1997-G", [11.16, 10.05, 1.11, 9.95]),
    ("AI-1997-EU", [10.33, 7.40, 2.94, 28.46]),
    ("INFO-1986-G", [10.54, 9.72, 0.82, 7.76]),
    ("INFO-1986-EU", [8.70, 6.95, 1.75, 20.07]),
    ("INFO-1992-G", [11.38, 10.44, 0.94, 8.26]),
    ("INFO-1992-EU", [10.16, 7.85, 2.31, 22.77]),
    ("INFO-1996-G", [11.62, 10.62, 1.00, 8.64]),
    ("INFO-1996-EU", [10.55, 7.71, 2.84, 26.89]),
    ("BIO-1986-G", [11.56, 10.22, 1.34, 11.59]),
    ("BIO-1986-EU", [10.74, 7.84, 2.90, 27.05]),
    // The published summary row lists sigma_h 10.64 where the panel table
    // has 10.67, and H0 1.24 where the panel Hz is 1.21; the rows below
    // carry the summary-table values and both checks still clear their
    // tolerances.
    ("BIO-1992-G", [11.87, 10.64, 1.24, 10.36]),
    ("BIO-1992-EU", [11.40, 8.32, 3.08, 27.01]),
    ("BIO-1996-G", [12.67, 11.44, 1.23, 9.71]),
    ("BIO-1996-EU", [12.23, 8.81, 3.42, 27.96]),
];

#[test]
fn acceptance_1_transmission_arithmetic_on_published_panels() {
    const TOL: f64 = 0.02;
    let started = Instant::now();
    let mut failures = Vec::new();
    for (name, v) in PANELS {
        let [_, h_xyz, h_xy, h_xz, h_yz, h_x, h_y, h_z, t_xy, t_xz, t_yz, t_xyz] = v;
        let checks = [
            ("Txy", h_x + h_y - h_xy, t_xy),
            ("Txz", h_x + h_z - h_xz, t_xz),
            ("Tyz", h_y + h_z - h_yz, t_yz),
            ("Txyz", h_x + h_y + h_z - h_xyz, t_xyz),
        ];
        for (label, computed, published) in checks {
            if (computed - published).abs() > TOL {
                failures.push(format!(
                    "{name} {label}: computed {computed:.4} vs published {published}"
                ));
            }
        }
    }
    if started.elapsed().as_secs_f64() >= 1.0 {
        failures.push(format!("runtime {:.3}s >= 1s", started.elapsed().as_secs_f64()));
    }
    report(1, "transmission arithmetic on published panels", &failures);
}

#[test]
fn acceptance_2_decomposition_summary_consistency() {
    // H0 recomputed from two-decimal inputs carries their rounding error,
    // so it is checked to +-0.01 bits absolute. %H0 divides two such
    // values; an absolute +-0.01 on a percentage near 25 is below the
    // noise floor of the inputs, so it is checked to +-0.01 relative
    // (1% of the published value).
    const H0_TOL: f64 = 0.01 + 1e-12;
    const PCT_REL_TOL: f64 = 0.01;
    const CHAIN_TOL: f64 = 0.05 + 1e-12;
    let panel_hz: HashMap<&str, f64> = PANELS.iter().map(|(n, v)| (*n, v[7])).collect();
    let mut failures = Vec::new();
    for (name, [htot, sigma, h0, pct]) in SUMMARY {
        let h0_calc = htot - sigma;
        if (h0_calc - h0).abs() > H0_TOL {
            failures.push(format!("{name} H0: {h0_calc:.4} vs published {h0}"));
        }
        let pct_calc = 100.0 * h0 / htot;
        if (pct_calc - pct).abs() > PCT_REL_TOL * pct {
            failures.push(format!("{name} %H0: {pct_calc:.4} vs published {pct}"));
        }
        // Chain rule: the between-group term equals the entropy of the
        // group-mass shares, which the panel table reports as Hz.
        let hz = panel_hz[name];
        if (h0 - hz).abs() > CHAIN_TOL {
            failures.push(format!("{name} chain rule: H0 {h0} vs Hz {hz}"));
        }
    }
    report(2, "decomposition summary consistency", &failures);
}

fn random_cube(rng: &mut ChaCha8Rng) -> CoocCube {
    let nx = rng.gen_range(1..=50usize);
    let ny = rng.gen_range(1..=50usize);
    let nz = rng.gen_range(1..=15usize);
    let nnz = rng.gen_range(1..=300usize);
    let mut cells: HashMap<(u32, u32, u32), u64> = HashMap::new();
    for _ in 0..nnz {
        let key = (
            rng.gen_range(0..nx as u32),
            rng.gen_range(0..ny as u32),
            rng.gen_range(0..nz as u32),
        );
        *cells.entry(key).or_insert(0) += rng.gen_range(1..=50u64);
    }
    let tag = |p: &str, n: usize| (0..n).map(|i| format!("{p}{i}")).collect::<Vec<_>>();
    CoocCube::from_cells(tag("r", nx), tag("w", ny), tag("g", nz), cells).unwrap()
}

#[test]
fn acceptance_3_property_suite_on_random_cubes() {
    const TOL: f64 = 1e-9;
    const CUBES: usize = 1000;
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5c1e);
    let mut failures = Vec::new();
    for trial in 0..CUBES {
        let cube = random_cube(&mut rng);
        let d = decompose(&cube).unwrap();
        let t = transmissions(&cube).unwrap();
        let mut check = |label: &str, ok: bool| {
            if !ok {
                failures.push(format!("trial {trial}: {label}"));
            }
        };

        check("decomposition identity", (d.h_total - (d.h0 + d.sigma_h)).abs() < TOL);
        let share_h: f64 = d
            .groups
            .iter()
            .filter(|g| g.weight > 0.0)
            .map(|g| -g.weight * g.weight.log2())
            .sum();
        check("H0 = H(group shares)", (d.h0 - share_h).abs() < TOL);

        for (label, value) in [
            ("Txy", t.t_xy),
            ("Txz", t.t_xz),
            ("Tyz", t.t_yz),
            ("Txyz", t.t_xyz),
        ] {
            check(label, value >= -TOL);
        }
        check("Txyz >= max pairwise", t.t_xyz >= t.t_xy.max(t.t_xz).max(t.t_yz) - TOL);
        check("Txy bound", t.t_xy <= t.h_x.min(t.h_y) + TOL);
        check("Txz bound", t.t_xz <= t.h_x.min(t.h_z) + TOL);
        check("Tyz bound", t.t_yz <= t.h_y.min(t.h_z) + TOL);

        // Scale invariance under count multiplication.
        let k = rng.gen_range(2..=9u64);
        let scaled = CoocCube::from_cells(
            cube.x_labels().to_vec(),
            cube.y_labels().to_vec(),
            cube.z_labels().to_vec(),
            cube.cells().map(|(key, c)| (key, c * k)),
        )
        .unwrap();
        let ts = transmissions(&scaled).unwrap();
        let ds = decompose(&scaled).unwrap();
        check("scale invariance H", (t.h_xyz - ts.h_xyz).abs() < TOL);
        check("scale invariance T", (t.t_xyz - ts.t_xyz).abs() < TOL);
        check("scale invariance H0", (d.h0 - ds.h0).abs() < TOL);

        // Permutation invariance under relabeling of the x axis.
        let nx = cube.x_labels().len() as u32;
        let mut perm: Vec<u32> = (0..nx).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let permuted = CoocCube::from_cells(
            cube.x_labels().to_vec(),
            cube.y_labels().to_vec(),
            cube.z_labels().to_vec(),
            cube.cells().map(|((x, y, z), c)| ((perm[x as usize], y, z), c)),
        )
        .unwrap();
        let tp = transmissions(&permuted).unwrap();
        check("permutation invariance Hx", (t.h_x - tp.h_x).abs() < TOL);
        check("permutation invariance Hxyz", (t.h_xyz - tp.h_xyz).abs() < TOL);
        check("permutation invariance Txyz", (t.t_xyz - tp.t_xyz).abs() < TOL);
    }
    if started.elapsed().as_secs_f64() >= 30.0 {
        failures.push(format!("runtime {:.1}s >= 30s", started.elapsed().as_secs_f64()));
    }
    report(3, "property suite on random cubes", &failures);
}

#[derive(Deserialize)]
struct OracleFixture {
    cube: serde_json::Value,
    decomposition: EntropyDecomposition,
    transmission: TransmissionReport,
}

#[test]
fn acceptance_4_oracle_equivalence() {
    const TOL: f64 = 1e-9;
    let mut failures = Vec::new();
    for (corpus, frozen) in [
        ("toy3.jsonl", "toy3_oracle.json"),
        ("synth200.jsonl", "synth200_oracle.json"),
    ] {
        let oracle: OracleFixture =
            serde_json::from_reader(File::open(fixture(frozen)).unwrap()).unwrap();
        let docs =
            parse_corpus(BufReader::new(File::open(data(corpus)).unwrap())).unwrap();
        let spec = CubeSpec::new(GroupingScheme::bundled_blocs());
        let cube = build_cube(&docs, &spec, &CountryTable::bundled()).unwrap();

        let oracle_cube =
            CoocCube::from_json(&serde_json::to_string(&oracle.cube).unwrap()).unwrap();
        if cube != oracle_cube {
            failures.push(format!("{corpus}: cube differs from oracle"));
        }

        let d = decompose(&cube).unwrap();
        let t = transmissions(&cube).unwrap();
        let od = &oracle.decomposition;
        let ot = &oracle.transmission;
        let pairs = [
            ("Htot", d.h_total, od.h_total),
            ("sigmaH", d.sigma_h, od.sigma_h),
            ("H0", d.h0, od.h0),
            ("pctH0", d.pct_h0, od.pct_h0),
            ("Hx", t.h_x, ot.h_x),
            ("Hy", t.h_y, ot.h_y),
            ("Hz", t.h_z, ot.h_z),
            ("Hxy", t.h_xy, ot.h_xy),
            ("Hxz", t.h_xz, ot.h_xz),
            ("Hyz", t.h_yz, ot.h_yz),
            ("Hxyz", t.h_xyz, ot.h_xyz),
            ("Txy", t.t_xy, ot.t_xy),
            ("Txz", t.t_xz, ot.t_xz),
            ("Tyz", t.t_yz, ot.t_yz),
            ("Txyz", t.t_xyz, ot.t_xyz),
        ];
        for (label, ours, theirs) in pairs {
            if (ours - theirs).abs() > TOL {
                failures.push(format!("{corpus} {label}: {ours} vs oracle {theirs}"));
            }
        }
        for (ga, gb) in d.groups.iter().zip(&od.groups) {
            if ga.label != gb.label
                || (ga.weight - gb.weight).abs() > TOL
                || (ga.entropy - gb.entropy).abs() > TOL
            {
                failures.push(format!("{corpus} group {}: differs from oracle", ga.label));
            }
        }
    }
    report(4, "oracle equivalence", &failures);
}

/// A planted three-block citation matrix. Within a block every journal
/// cites the same spread of block members (some much more cited than
/// others), scaled per citing journal with multiplicative noise;
/// off-block cells carry noise well under 5% of in-block mass.
fn planted_matrix(rng: &mut ChaCha8Rng) -> (JournalCitationMatrix, Vec<usize>) {
    let sizes: Vec<usize> = (0..3).map(|_| rng.gen_range(4..=6)).collect();
    let blocks: Vec<usize> = sizes
        .iter()
        .enumerate()
        .flat_map(|(b, &s)| std::iter::repeat(b).take(s))
        .collect();
    let n = blocks.len();
    let mut attract = vec![0.0f64; n];
    for b in 0..3 {
        let members: Vec<usize> = (0..n).filter(|&i| blocks[i] == b).collect();
        let nb = members.len();
        let mut levels: Vec<f64> = (0..nb)
            .map(|k| 40.0 * (400.0f64 / 40.0).powf(k as f64 / (nb - 1) as f64))
            .collect();
        for i in (1..levels.len()).rev() {
            levels.swap(i, rng.gen_range(0..=i));
        }
        for (&j, level) in members.iter().zip(levels) {
            attract[j] = level;
        }
    }
    let mut counts = vec![vec![0u64; n]; n];
    for i in 0..n {
        let scale = rng.gen_range(0.6..1.4);
        for j in 0..n {
            counts[i][j] = if blocks[i] == blocks[j] {
                (attract[j] * scale * rng.gen_range(0.8..1.25)).round().max(1.0) as u64
            } else {
                rng.gen_range(0..8)
            };
        }
    }
    let journals = (0..n).map(|i| format!("J{i:02}")).collect();
    (JournalCitationMatrix::new(journals, counts).unwrap(), blocks)
}

fn partition(labels: &[usize]) -> BTreeSet<BTreeSet<usize>> {
    let mut by_label: HashMap<usize, BTreeSet<usize>> = HashMap::new();
    for (i, &l) in labels.iter().enumerate() {
        by_label.entry(l).or_default().insert(i);
    }
    by_label.into_values().collect()
}

#[test]
fn acceptance_5_delineation_recovery() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xde11);
    let mut failures = Vec::new();
    for trial in 0..30 {
        let (matrix, blocks) = planted_matrix(&mut rng);
        let env: BTreeSet<String> = matrix.journals().iter().cloned().collect();
        let (names, corr) = matrix.correlation_matrix(&env).unwrap();
        let model = principal_factors(&corr, &names, 1.0)
            .unwrap()
            .rotate_varimax(1e-8, 100);
        // Map assignments back to the original journal order.
        let mut assigned = vec![0usize; names.len()];
        for (pos, name) in names.iter().enumerate() {
            let orig = matrix.journals().iter().position(|j| j == name).unwrap();
            assigned[orig] = model.assignment[pos];
        }
        if partition(&assigned) != partition(&blocks) {
            failures.push(format!(
                "trial {trial}: recovered {assigned:?}, planted {blocks:?} ({} factors)",
                model.factor_count()
            ));
        }
    }

    // Environment threshold boundary: a citation count exactly at
    // threshold * total is included, one less is excluded. With a 25%
    // threshold and 40 citations received, the cut sits exactly at 10.
    let journals: Vec<String> = ["SEED", "AT-CUT", "HEAVY"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let at_cut = JournalCitationMatrix::new(
        journals.clone(),
        vec![vec![0, 0, 0], vec![10, 0, 0], vec![30, 0, 0]],
    )
    .unwrap();
    let env = at_cut.environment("SEED", 0.25).unwrap();
    if !env.contains("AT-CUT") {
        failures.push("count == threshold*total was excluded".into());
    }
    let below_cut = JournalCitationMatrix::new(
        journals,
        vec![vec![0, 0, 0], vec![9, 0, 0], vec![30, 0, 0]],
    )
    .unwrap();
    let env = below_cut.environment("SEED", 0.25).unwrap();
    if env.contains("AT-CUT") {
        failures.push("count just below threshold*total was included".into());
    }
    if !env.contains("HEAVY") || !env.contains("SEED") {
        failures.push("qualifying journals missing from environment".into());
    }
    report(5, "delineation recovery", &failures);
}

fn synthetic_corpus(docs: usize, rng: &mut ChaCha8Rng) -> Vec<Document> {
    const COUNTRIES: [&str; 15] = [
        "AUSTRIA", "BELGIUM", "GERMANY", "DENMARK", "SPAIN", "FINLAND", "FRANCE",
        "ENGLAND", "GREECE", "IRELAND", "ITALY", "LUXEMBOURG", "NETHERLANDS",
        "PORTUGAL", "SWEDEN",
    ];
    const POOL: usize = 400;
    // Quadratic bias concentrates mass on low indices so the top-250
    // cut is exercised against a larger vocabulary.
    let biased = |rng: &mut ChaCha8Rng| {
        let u: f64 = rng.gen_range(0.0..1.0);
        (u * u * POOL as f64) as usize
    };
    (0..docs)
        .map(|i| {
            let title = (0..6)
                .map(|_| format!("term{:03}", biased(rng)))
                .collect::<Vec<_>>()
                .join(" ");
            let references = (0..8)
                .map(|_| format!("AUTH{:03} X, 1990, J SYNTH, V1, P{}", biased(rng), i % 97))
                .collect();
            let country = COUNTRIES[rng.gen_range(0..COUNTRIES.len())];
            Document {
                id: format!("doc{i:05}"),
                year: 1996,
                title,
                journal: "J SYNTH".into(),
                addresses: vec![format!("UNIV {i}, CITY, {country}")],
                references,
            }
        })
        .collect()
}

fn peak_rss_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    status
        .lines()
        .find(|l| l.starts_with("VmHWM:"))?
        .split_whitespace()
        .nth(1)?
        .parse()
        .ok()
}

#[test]
fn acceptance_6_scale() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ca1e);
    let docs = synthetic_corpus(10_000, &mut rng);
    let started = Instant::now();
    let spec = CubeSpec::new(GroupingScheme::bundled_eu15());
    let cube = build_cube(&docs, &spec, &CountryTable::bundled()).unwrap();
    let d = decompose(&cube).unwrap();
    let t = transmissions(&cube).unwrap();
    let elapsed = started.elapsed().as_secs_f64();

    let mut failures = Vec::new();
    if cube.x_labels().len() != 250 || cube.y_labels().len() != 250 {
        failures.push(format!(
            "vocabularies {}x{}, expected 250x250",
            cube.x_labels().len(),
            cube.y_labels().len()
        ));
    }
    if cube.z_labels().len() != 15 {
        failures.push(format!("{} groups, expected 15", cube.z_labels().len()));
    }
    if elapsed >= 10.0 {
        failures.push(format!("pipeline took {elapsed:.2}s >= 10s"));
    }
    // Sparse storage: well under the dense 250*250*15 cell count.
    let dense = 250 * 250 * 15;
    if cube.nnz() >= dense {
        failures.push(format!("nnz {} not sparse vs dense {dense}", cube.nnz()));
    }
    if let Some(kb) = peak_rss_kb() {
        if kb >= 1024 * 1024 {
            failures.push(format!("peak RSS {kb} kB >= 1 GB"));
        }
    }
    if !(d.h_total.is_finite() && t.t_xyz.is_finite()) {
        failures.push("non-finite results at scale".into());
    }
    report(6, "scale", &failures);
}
