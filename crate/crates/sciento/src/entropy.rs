//! Shannon entropy, the between-group (Theil) decomposition with %H0
//! normalization, and pairwise/three-way transmission values.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cooccur::{to_distribution, Axis, CoocCube, CubeError, ProbDist};

#[derive(Debug, Error)]
pub enum EntropyError {
    #[error("cannot decompose a cube with zero total")]
    ZeroTotal,
    #[error("cube has no groups")]
    NoGroups,
    #[error(transparent)]
    Cube(#[from] CubeError),
}

/// Weight and within-group entropy of one group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupTerm {
    pub label: String,
    /// Share of the total co-occurrence mass.
    pub weight: f64,
    /// Entropy of the group's normalized (x, y) matrix, in bits.
    pub entropy: f64,
}

/// Between-group decomposition: `h_total = h0 + sigma_h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyDecomposition {
    pub h_total: f64,
    pub groups: Vec<GroupTerm>,
    /// Weighted sum of within-group entropies.
    pub sigma_h: f64,
    /// Between-group entropy.
    pub h0: f64,
    /// `100 * h0 / h_total`; zero when `h_total` is zero.
    pub pct_h0: f64,
}

/// The seven marginal/joint entropies of the cube and the four
/// transmission (mutual information) values derived from them, in bits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransmissionReport {
    pub h_x: f64,
    pub h_y: f64,
    pub h_z: f64,
    pub h_xy: f64,
    pub h_xz: f64,
    pub h_yz: f64,
    pub h_xyz: f64,
    pub t_xy: f64,
    pub t_xz: f64,
    pub t_yz: f64,
    pub t_xyz: f64,
}

/// Kahan-compensated sum in a fixed order.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

fn entropy_of_probs_sorted(probs: impl Iterator<Item = f64>) -> f64 {
    compensated_sum(probs.filter(|&p| p > 0.0).map(|p| -p * p.log2()))
}

/// `H = -sum p log2 p` over the cells of a distribution, summed in
/// canonical cell order. Zero-probability cells contribute nothing.
pub fn shannon_entropy(dist: &ProbDist) -> f64 {
    entropy_of_probs_sorted(dist.sorted_cells().into_iter().map(|(_, p)| p))
}

/// Decomposes the full-cube entropy into between-group entropy and the
/// weighted sum of within-group entropies over the Z axis.
pub fn decompose(cube: &CoocCube) -> Result<EntropyDecomposition, EntropyError> {
    if cube.total() == 0 {
        return Err(EntropyError::ZeroTotal);
    }
    if cube.z_labels().is_empty() {
        return Err(EntropyError::NoGroups);
    }
    let total = cube.total() as f64;
    let h_total = shannon_entropy(&to_distribution(cube)?);

    // Per-group (x, y) slices, normalized within the group.
    let mut slices: HashMap<u32, Vec<((u32, u32), u64)>> = HashMap::new();
    for ((x, y, z), c) in cube.cells() {
        slices.entry(z).or_default().push(((x, y), c));
    }

    let mut groups = Vec::with_capacity(cube.z_labels().len());
    for (z, label) in cube.z_labels().iter().enumerate() {
        let cells = slices.remove(&(z as u32)).unwrap_or_default();
        let mass: u64 = cells.iter().map(|(_, c)| c).sum();
        let weight = mass as f64 / total;
        let entropy = if mass == 0 {
            0.0
        } else {
            let mut sorted = cells;
            sorted.sort_unstable_by_key(|&(k, _)| k);
            entropy_of_probs_sorted(sorted.iter().map(|&(_, c)| c as f64 / mass as f64))
        };
        groups.push(GroupTerm {
            label: label.clone(),
            weight,
            entropy,
        });
    }

    // Zero-mass groups carry weight 0 and drop out of the sum.
    let sigma_h = compensated_sum(groups.iter().map(|g| g.weight * g.entropy));
    let h0 = h_total - sigma_h;
    let pct_h0 = if h_total > 0.0 {
        100.0 * h0 / h_total
    } else {
        0.0
    };
    Ok(EntropyDecomposition {
        h_total,
        groups,
        sigma_h,
        h0,
        pct_h0,
    })
}

/// Computes the seven marginal entropies of the cube distribution and the
/// four transmission values `T = sum of marginal entropies - joint`.
pub fn transmissions(cube: &CoocCube) -> Result<TransmissionReport, EntropyError> {
    if cube.total() == 0 {
        return Err(EntropyError::ZeroTotal);
    }
    let dist = to_distribution(cube)?;
    let h = |keep: &[Axis]| -> Result<f64, EntropyError> {
        Ok(shannon_entropy(&dist.marginal(keep)?))
    };
    let h_x = h(&[Axis::X])?;
    let h_y = h(&[Axis::Y])?;
    let h_z = h(&[Axis::Z])?;
    let h_xy = h(&[Axis::X, Axis::Y])?;
    let h_xz = h(&[Axis::X, Axis::Z])?;
    let h_yz = h(&[Axis::Y, Axis::Z])?;
    let h_xyz = shannon_entropy(&dist);
    Ok(TransmissionReport {
        h_x,
        h_y,
        h_z,
        h_xy,
        h_xz,
        h_yz,
        h_xyz,
        t_xy: h_x + h_y - h_xy,
        t_xz: h_x + h_z - h_xz,
        t_yz: h_y + h_z - h_yz,
        t_xyz: h_x + h_y + h_z - h_xyz,
    })
}
