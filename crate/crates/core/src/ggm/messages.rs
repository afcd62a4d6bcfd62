//! Exact normalizers by residue-class message passing.
//!
//! For a node `v` let `H_v(t)` be the total weight of the subtree below `v`
//! when the height at `v` lies in class `t`. Then
//!
//! ```text
//! H_v(t) = [v on the boundary ? z(t) : 1] * prod_(children c) M_c(t),
//! M_c(t) = sum_(d in Z_q) K(d) * H_c(t + d),
//! ```
//!
//! where `K(d)` is the bond weight `theta^|zeta|` summed over the increments
//! `zeta = d (mod q)`. With the exact class sums this gives the untruncated
//! normalizer; with sums restricted to `|zeta| <= M` it gives the window
//! normalizer used by the sampler.

use super::BoundaryWeights;
use crate::error::{Error, Result};
use crate::model::{check_theta, class_sums, full_sum, pow_abs, window_tail};
use crate::tree::FiniteSubtree;

/// Per-class values of a subtree weight, strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassMessage {
    values: Vec<f64>,
}

impl ClassMessage {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidPeriod(0));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::Domain(format!(
                "message entries must be positive, found {v}"
            )));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, class: usize) -> f64 {
        self.values[class]
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// `sum over |zeta| <= window, zeta = d (mod q) of theta^|zeta|`, by direct
/// summation.
pub fn windowed_class_sums(theta: f64, q: usize, window: u32) -> Result<Vec<f64>> {
    check_theta(theta)?;
    if q == 0 {
        return Err(Error::InvalidPeriod(0));
    }
    let m = window as i64;
    let mut sums = vec![0.0; q];
    for zeta in -m..=m {
        sums[zeta.rem_euclid(q as i64) as usize] += pow_abs(theta, zeta);
    }
    Ok(sums)
}

/// Subtree tables `H_v` for every node, with the class kernel of bond `b`
/// given by `kernel(b)`.
pub(crate) fn subtree_tables<'k, L: BoundaryWeights + ?Sized>(
    law: &L,
    tree: &FiniteSubtree,
    kernel: impl Fn(usize) -> &'k [f64],
) -> Vec<Vec<f64>> {
    let q = law.period();
    let nodes = tree.nodes();
    let mut tables = vec![Vec::new(); nodes.len()];
    for (v, node) in nodes.iter().enumerate().rev() {
        let mut h: Vec<f64> = if node.is_boundary {
            law.weights().to_vec()
        } else {
            vec![1.0; q]
        };
        for &b in &node.child_bonds {
            let child = &tables[tree.bond_nodes()[b].1];
            let msg = bond_message(kernel(b), child);
            for (ht, mt) in h.iter_mut().zip(msg) {
                *ht *= mt;
            }
        }
        tables[v] = h;
    }
    tables
}

pub(crate) fn bond_message(kernel: &[f64], child: &[f64]) -> Vec<f64> {
    let q = child.len();
    (0..q)
        .map(|t| (0..q).map(|d| kernel[d] * child[(t + d) % q]).sum())
        .collect()
}

fn root_message<L: BoundaryWeights + ?Sized>(
    law: &L,
    tree: &FiniteSubtree,
    sums: &[f64],
) -> Result<ClassMessage> {
    let mut tables = subtree_tables(law, tree, |_| sums);
    ClassMessage::new(tables.swap_remove(0))
}

/// Normalizers of the pinned measures: entry `s` is the total weight of all
/// configurations with the root in class `s`.
pub fn pinned_normalizers<L: BoundaryWeights + ?Sized>(
    law: &L,
    tree: &FiniteSubtree,
    theta: f64,
) -> Result<ClassMessage> {
    let sums = class_sums(theta, law.period())?;
    root_message(law, tree, &sums)
}

/// Exact normalizer of the marginal on the bonds meeting the subtree.
pub fn partition_function<L: BoundaryWeights + ?Sized>(
    law: &L,
    tree: &FiniteSubtree,
    theta: f64,
) -> Result<f64> {
    Ok(pinned_normalizers(law, tree, theta)?.total())
}

/// Normalizer restricted to configurations with every `|zeta_b| <= window`.
pub fn partition_function_windowed<L: BoundaryWeights + ?Sized>(
    law: &L,
    tree: &FiniteSubtree,
    theta: f64,
    window: u32,
) -> Result<f64> {
    let sums = windowed_class_sums(theta, law.period(), window)?;
    Ok(root_message(law, tree, &sums)?.total())
}

/// Upper bound on `Z - Z_M` for the window `M`:
/// `q * z_max^|dLambda| * (F^B - (F - t)^B)` with `F = sum theta^|zeta|`,
/// `t` the per-bond tail mass and `B` the number of bonds.
pub fn partition_tail_bound<L: BoundaryWeights + ?Sized>(
    law: &L,
    tree: &FiniteSubtree,
    theta: f64,
    window: u32,
) -> Result<f64> {
    let f = full_sum(theta)?;
    let t = window_tail(theta, window);
    let z_max = law.weights().iter().copied().fold(0.0, f64::max);
    let b = tree.bonds().len() as i32;
    let nb = tree.boundary().len() as i32;
    Ok(law.period() as f64 * z_max.powi(nb) * (f.powi(b) - (f - t).powi(b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{class_sum, PeriodicBoundaryLaw};

    #[test]
    fn windowed_sums_converge() {
        let theta = 0.5;
        let exact = class_sums(theta, 3).unwrap();
        let w = windowed_class_sums(theta, 3, 60).unwrap();
        for (a, b) in exact.iter().zip(&w) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(windowed_class_sums(theta, 0, 5).is_err());
    }

    #[test]
    fn free_law_single_bond() {
        let theta = 0.5;
        let law = PeriodicBoundaryLaw::trivial(2).unwrap();
        let t = FiniteSubtree::single_bond(2).unwrap();
        let z = partition_function(&law, &t, theta).unwrap();
        assert!((z - (1.0 + theta) / (1.0 - theta)).abs() < 1e-14);
    }

    #[test]
    fn single_vertex_two_periodic() {
        let theta = 0.3;
        let a = 0.6;
        let law = PeriodicBoundaryLaw::new(2, vec![1.0, a]).unwrap();
        let t = FiniteSubtree::build(2, &[], 0).unwrap();
        let cs0 = class_sum(theta, 2, 0).unwrap();
        let cs1 = class_sum(theta, 2, 1).unwrap();
        let m = [cs0 + a * cs1, cs1 + a * cs0];
        let expect = m[0].powi(3) + m[1].powi(3);
        let z = partition_function(&law, &t, theta).unwrap();
        assert!((z - expect).abs() < 1e-13 * expect);
        let pinned = pinned_normalizers(&law, &t, theta).unwrap();
        assert!((pinned.get(1) - m[1].powi(3)).abs() < 1e-13);
    }

    #[test]
    fn message_positivity() {
        assert!(ClassMessage::new(vec![1.0, 0.0]).is_err());
        assert!(ClassMessage::new(vec![]).is_err());
        assert_eq!(ClassMessage::new(vec![1.0, 2.0]).unwrap().total(), 3.0);
    }

    #[test]
    fn window_tail_bound_holds() {
        let law = PeriodicBoundaryLaw::new(2, vec![1.0, 0.4, 2.5, 0.8]).unwrap();
        let t = FiniteSubtree::build(2, &[(0, 1)], 0).unwrap();
        for m in [2, 5, 10, 25] {
            let exact = partition_function(&law, &t, 0.6).unwrap();
            let win = partition_function_windowed(&law, &t, 0.6, m).unwrap();
            let bound = partition_tail_bound(&law, &t, 0.6, m).unwrap();
            assert!(win <= exact);
            assert!(exact - win <= bound + 1e-12 * exact, "window {m}");
        }
    }
}
