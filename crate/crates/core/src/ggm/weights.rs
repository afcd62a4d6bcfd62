use super::BoundaryWeights;
use crate::error::{Error, Result};
use crate::model::{check_theta, pow_abs};
use crate::tree::{n_vector, FiniteSubtree, GradientConfig};

fn bond_factor(zeta: &GradientConfig, theta: f64) -> f64 {
    zeta.values().iter().map(|&v| pow_abs(theta, v)).product()
}

/// Unnormalized weight of `zeta` under the gradient measure pinned to class
/// `s` at the root.
pub fn pinned_weight<L: BoundaryWeights + ?Sized>(
    law: &L,
    tree: &FiniteSubtree,
    s: usize,
    zeta: &GradientConfig,
    theta: f64,
) -> Result<f64> {
    check_theta(theta)?;
    let q = law.period();
    if s >= q {
        return Err(Error::InvalidResidue { d: s, q });
    }
    let sums = tree.boundary_path_sums(zeta)?;
    Ok(pinned_from_sums(law, &sums, s) * bond_factor(zeta, theta))
}

fn pinned_from_sums<L: BoundaryWeights + ?Sized>(law: &L, sums: &[i64], s: usize) -> f64 {
    sums.iter().map(|&p| law.at(s as i64 + p)).product()
}

/// Unnormalized marginal weight: the sum over `s` of the pinned weights.
pub fn marginal_weight<L: BoundaryWeights + ?Sized>(
    law: &L,
    tree: &FiniteSubtree,
    zeta: &GradientConfig,
    theta: f64,
) -> Result<f64> {
    check_theta(theta)?;
    let sums = tree.boundary_path_sums(zeta)?;
    let bonds = bond_factor(zeta, theta);
    Ok((0..law.period())
        .map(|s| pinned_from_sums(law, &sums, s) * bonds)
        .sum())
}

/// The same weight written through the n-vector:
/// `sum_j prod_i z_i^(n_(i+j)) * prod_b theta^|zeta_b|`.
pub fn n_vector_weight<L: BoundaryWeights + ?Sized>(
    law: &L,
    tree: &FiniteSubtree,
    zeta: &GradientConfig,
    theta: f64,
) -> Result<f64> {
    check_theta(theta)?;
    let q = law.period();
    let n = n_vector(tree, zeta, q)?;
    let z = law.weights();
    let boundary: f64 = (0..q)
        .map(|j| {
            (0..q)
                .map(|i| z[i].powi(n[(i + j) % q] as i32))
                .product::<f64>()
        })
        .sum();
    Ok(boundary * bond_factor(zeta, theta))
}
