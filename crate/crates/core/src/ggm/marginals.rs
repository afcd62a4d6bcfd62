use super::messages::{partition_function, subtree_tables};
use super::weights::marginal_weight;
use super::BoundaryWeights;
use crate::error::{Error, Result};
use crate::model::{check_theta, class_sums, full_sum, pow_abs, window_tail};
use crate::tree::{Bond, FiniteSubtree, GradientConfig};

/// `M(r) = sum_d K(d) z(r + d)`: weight of one boundary bond hanging off a
/// vertex in class `r`, summed over its increment.
fn boundary_messages<L: BoundaryWeights + ?Sized>(law: &L, sums: &[f64]) -> Vec<f64> {
    let q = law.period();
    (0..q)
        .map(|r| (0..q).map(|d| sums[d] * law.at((r + d) as i64)).sum())
        .collect()
}

/// Probability that a single bond carries increment `zeta`.
///
/// This is the marginal on the single-bond volume whose two endpoints are
/// both boundary sites.
pub fn single_bond_marginal<L: BoundaryWeights + ?Sized>(
    law: &L,
    theta: f64,
    zeta: i64,
) -> Result<f64> {
    let sums = class_sums(theta, law.period())?;
    let m = boundary_messages(law, &sums);
    let q = law.period() as i64;
    let denom: f64 = (0..q).map(|s| law.at(s) * m[s as usize]).sum();
    // the numerator only depends on |zeta| after s -> s - zeta
    let step = zeta.abs();
    let numer: f64 = (0..q).map(|s| law.at(s) * law.at(s + step)).sum();
    Ok(numer * pow_abs(theta, zeta) / denom)
}

/// Joint probability of the increments on two of the `k + 1` bonds leaving
/// one vertex, both oriented away from it.
pub fn two_bond_marginal<L: BoundaryWeights + ?Sized>(
    law: &L,
    theta: f64,
    zeta1: i64,
    zeta2: i64,
) -> Result<f64> {
    let sums = class_sums(theta, law.period())?;
    let m = boundary_messages(law, &sums);
    let k = law.order() as i32;
    let q = law.period() as i64;
    let denom: f64 = m.iter().map(|v| v.powi(k + 1)).sum();
    let numer: f64 = (0..q)
        .map(|s| law.at(s + zeta1) * law.at(s + zeta2) * m[s as usize].powi(k - 1))
        .sum();
    Ok(numer * pow_abs(theta, zeta1) * pow_abs(theta, zeta2) / denom)
}

/// Transition probability `omega -> x` of the tree-indexed chain built from
/// the law.
pub fn transition_probability<L: BoundaryWeights + ?Sized>(
    law: &L,
    theta: f64,
    omega: i64,
    x: i64,
) -> Result<f64> {
    let sums = class_sums(theta, law.period())?;
    let q = law.period();
    let denom: f64 = (0..q).map(|d| law.at(omega + d as i64) * sums[d]).sum();
    Ok(law.at(x) * pow_abs(theta, x - omega) / denom)
}

/// Normalized probability of a full configuration on the bonds meeting the
/// subtree.
pub fn configuration_probability<L: BoundaryWeights + ?Sized>(
    law: &L,
    tree: &FiniteSubtree,
    zeta: &GradientConfig,
    theta: f64,
) -> Result<f64> {
    Ok(marginal_weight(law, tree, zeta, theta)? / partition_function(law, tree, theta)?)
}

/// Per-bond marginals of a subtree on the window `|zeta| <= window`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalTable {
    pub bonds: Vec<Bond>,
    pub window: u32,
    /// `probabilities[b][zeta + window]`
    pub probabilities: Vec<Vec<f64>>,
    /// Exact normalizer of the full marginal.
    pub normalizer: f64,
    /// Upper bound on the mass any single bond puts outside the window.
    pub tail_bound: f64,
}

impl MarginalTable {
    pub fn probability(&self, bond: usize, zeta: i64) -> Option<f64> {
        let idx = zeta.checked_add(self.window as i64)?;
        self.probabilities
            .get(bond)?
            .get(usize::try_from(idx).ok()?)
            .copied()
    }
}

/// Exact one-bond marginals for every bond of `tree`, listed over the window.
pub fn marginal_table<L: BoundaryWeights + ?Sized>(
    law: &L,
    tree: &FiniteSubtree,
    theta: f64,
    window: u32,
) -> Result<MarginalTable> {
    check_theta(theta)?;
    if window == 0 {
        return Err(Error::Domain("window must be at least 1".into()));
    }
    let q = law.period();
    let sums = class_sums(theta, q)?;
    let base = subtree_tables(law, tree, |_| &sums);
    let normalizer: f64 = base[0].iter().sum();

    let tail_ratio = window_tail(theta, window) / full_sum(theta)?;
    let mut tail_bound: f64 = 0.0;
    let mut probabilities = Vec::with_capacity(tree.bonds().len());
    for (b, &(_, child)) in tree.bond_nodes().iter().enumerate() {
        let h = &base[child];
        let h_max = h.iter().copied().fold(0.0, f64::max);
        let h_min = h.iter().copied().fold(f64::INFINITY, f64::min);
        tail_bound = tail_bound.max(h_max / h_min * tail_ratio);

        let m = window as i64;
        let mut row = Vec::with_capacity(2 * window as usize + 1);
        for zeta in -m..=m {
            let mut delta = vec![0.0; q];
            delta[zeta.rem_euclid(q as i64) as usize] = pow_abs(theta, zeta);
            let tables = subtree_tables(law, tree, |c| if c == b { &delta } else { &sums });
            row.push(tables[0].iter().sum::<f64>() / normalizer);
        }
        probabilities.push(row);
    }
    Ok(MarginalTable {
        bonds: tree.bonds().to_vec(),
        window,
        probabilities,
        normalizer,
        tail_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ggm::RawWeights;
    use crate::model::PeriodicBoundaryLaw;
    use crate::solver::solve_2periodic;
    use proptest::prelude::*;

    fn free(k: usize) -> PeriodicBoundaryLaw {
        PeriodicBoundaryLaw::trivial(k).unwrap()
    }

    #[test]
    fn free_single_bond_values() {
        let law = free(2);
        let p0 = single_bond_marginal(&law, 0.5, 0).unwrap();
        let p1 = single_bond_marginal(&law, 0.5, 1).unwrap();
        assert!((p0 - 1.0 / 3.0).abs() < 1e-15);
        assert!((p1 - 1.0 / 6.0).abs() < 1e-15);
        for zeta in -5..=5 {
            let p = single_bond_marginal(&law, 0.3, zeta).unwrap();
            let expect = 0.3f64.powi(zeta.abs() as i32) * 0.7 / 1.3;
            assert!((p - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn single_bond_agrees_with_tree_volume() {
        let law = PeriodicBoundaryLaw::new(2, vec![1.0, 0.3, 2.0]).unwrap();
        let t = FiniteSubtree::single_bond(2).unwrap();
        for zeta in -4..=4 {
            let c = GradientConfig::from_values(&t, vec![zeta]).unwrap();
            let a = configuration_probability(&law, &t, &c, 0.45).unwrap();
            let b = single_bond_marginal(&law, 0.45, zeta).unwrap();
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn two_bond_agrees_with_vertex_volume() {
        // sum the single-vertex marginal over the third bond
        let law = PeriodicBoundaryLaw::new(2, vec![1.0, 0.3, 2.0]).unwrap();
        let t = FiniteSubtree::build(2, &[], 0).unwrap();
        let theta = 0.35;
        for (z1, z2) in [(0, 0), (1, -2), (3, 1)] {
            let mut total = 0.0;
            for z3 in -80..=80 {
                let c = GradientConfig::from_values(&t, vec![z1, z2, z3]).unwrap();
                total += configuration_probability(&law, &t, &c, theta).unwrap();
            }
            let direct = two_bond_marginal(&law, theta, z1, z2).unwrap();
            assert!((total - direct).abs() < 1e-14, "({z1}, {z2})");
        }
    }

    #[test]
    fn free_transition() {
        let law = free(3);
        let p = transition_probability(&law, 0.5, 4, 4).unwrap();
        assert!((p - 1.0 / 3.0).abs() < 1e-15);
        for omega in -3..=3 {
            let a = transition_probability(&law, 0.5, omega, omega + 2).unwrap();
            let b = transition_probability(&law, 0.5, 0, 2).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn transition_rows_sum_to_one() {
        let a = solve_2periodic(7.0).unwrap()[1];
        let law = PeriodicBoundaryLaw::from_u(2, &[1.0, a]).unwrap();
        let theta = crate::model::TemperatureParams::from_tau(7.0)
            .unwrap()
            .theta();
        let m = 400;
        for omega in [0, 1] {
            let total: f64 = (omega - m..=omega + m)
                .map(|x| transition_probability(&law, theta, omega, x).unwrap())
                .sum();
            let z_ratio = law.z().iter().copied().fold(0.0, f64::max)
                / law.z().iter().copied().fold(f64::INFINITY, f64::min);
            let tail = z_ratio * window_tail(theta, m as u32) / full_sum(theta).unwrap();
            assert!(tail <= 1e-10);
            assert!((total - 1.0).abs() <= tail + 1e-13);
        }
    }

    #[test]
    fn table_matches_direct_marginals() {
        let law = PeriodicBoundaryLaw::new(2, vec![1.0, 0.5, 1.5, 0.8]).unwrap();
        let t = FiniteSubtree::single_bond(2).unwrap();
        let table = marginal_table(&law, &t, 0.4, 20).unwrap();
        for zeta in -20..=20 {
            let a = table.probability(0, zeta).unwrap();
            let b = single_bond_marginal(&law, 0.4, zeta).unwrap();
            assert!((a - b).abs() < 1e-14);
        }
        assert!(table.probability(0, 21).is_none());
        let mass: f64 = table.probabilities[0].iter().sum();
        assert!(mass <= 1.0 + 1e-12 && mass >= 1.0 - table.tail_bound);
    }

    #[test]
    fn table_rows_cover_all_bonds() {
        let law = PeriodicBoundaryLaw::new(3, vec![1.0, 0.5, 1.5]).unwrap();
        let t = FiniteSubtree::build(3, &[(0, 1), (1, 2)], 0).unwrap();
        let table = marginal_table(&law, &t, 0.3, 25).unwrap();
        assert_eq!(table.probabilities.len(), t.bonds().len());
        for row in &table.probabilities {
            let mass: f64 = row.iter().sum();
            assert!(mass >= 1.0 - table.tail_bound - 1e-12 && mass <= 1.0 + 1e-12);
        }
        assert!(marginal_table(&law, &t, 0.3, 0).is_err());
    }

    fn shifted(z: &[f64], j: usize) -> Vec<f64> {
        (0..z.len()).map(|i| z[(i + j) % z.len()]).collect()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300)
    }

    proptest! {
        #[test]
        fn sign_symmetry(z in proptest::collection::vec(0.05f64..5.0, 1..7),
                         theta in 0.05f64..0.95, zeta in -20i64..20) {
            let law = RawWeights::new(2, z).unwrap();
            prop_assert_eq!(
                single_bond_marginal(&law, theta, zeta).unwrap(),
                single_bond_marginal(&law, theta, -zeta).unwrap()
            );
        }

        #[test]
        fn shift_and_scale_invariance(z in proptest::collection::vec(0.05f64..5.0, 1..7),
                                      j in 0usize..7, c in 0.01f64..100.0,
                                      k in 2usize..5, theta in 0.05f64..0.9,
                                      z1 in -6i64..6, z2 in -6i64..6) {
            let base = RawWeights::new(k, z.clone()).unwrap();
            let shift = RawWeights::new(k, shifted(&z, j % z.len())).unwrap();
            let scaled = RawWeights::new(k, z.iter().map(|v| v * c).collect()).unwrap();
            for other in [&shift, &scaled] {
                prop_assert!(close(single_bond_marginal(&base, theta, z1).unwrap(),
                                   single_bond_marginal(other, theta, z1).unwrap()));
                prop_assert!(close(two_bond_marginal(&base, theta, z1, z2).unwrap(),
                                   two_bond_marginal(other, theta, z1, z2).unwrap()));
            }
            let tree = FiniteSubtree::build(k, &[(0, 1)], 0).unwrap();
            let cfg = GradientConfig::from_values(
                &tree,
                (0..tree.bonds().len() as i64).map(|b| (b * z1 + z2) % 4).collect(),
            ).unwrap();
            let p = configuration_probability(&base, &tree, &cfg, theta).unwrap();
            prop_assert!(close(p, configuration_probability(&shift, &tree, &cfg, theta).unwrap()));
            prop_assert!(close(p, configuration_probability(&scaled, &tree, &cfg, theta).unwrap()));
        }
    }
}
