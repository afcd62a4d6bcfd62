//! Exact sampling of the window-restricted marginal.
//!
//! The root class `s` is drawn with probability proportional to `Z_M(s)`.
//! Bonds are then visited parent before child: given the parent class `r`,
//! the increment `zeta` in `[-M, M]` is drawn proportional to
//! `theta^|zeta| * H_child(r + zeta)`.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::messages::{subtree_tables, windowed_class_sums};
use super::BoundaryWeights;
use crate::error::{Error, Result};
use crate::model::{full_sum, pow_abs, window_tail};
use crate::tolerance;
use crate::tree::{FiniteSubtree, GradientConfig};

const MAX_BONDS: usize = 64;

#[derive(Debug, Clone)]
pub struct GradientSampler {
    tree: FiniteSubtree,
    q: usize,
    window: u32,
    root: WeightedIndex<f64>,
    /// `bonds[b][r]`: law of the increment on bond `b` given parent class `r`
    bonds: Vec<Vec<WeightedIndex<f64>>>,
    tail_bound: f64,
}

impl GradientSampler {
    pub fn new<L: BoundaryWeights + ?Sized>(
        law: &L,
        tree: &FiniteSubtree,
        theta: f64,
        window: u32,
    ) -> Result<Self> {
        if window == 0 {
            return Err(Error::Domain("window must be at least 1".into()));
        }
        let n_bonds = tree.bonds().len();
        if n_bonds > MAX_BONDS {
            return Err(Error::TooManyBonds(n_bonds));
        }
        let tail_bound = relative_tail_bound(law, tree, theta, window)?;
        if tail_bound > tolerance::SAMPLER_TAIL {
            return Err(Error::WindowTooSmall {
                tail: tail_bound,
                limit: tolerance::SAMPLER_TAIL,
            });
        }

        let q = law.period();
        let sums = windowed_class_sums(theta, q, window)?;
        let tables = subtree_tables(law, tree, |_| &sums);
        let to_err = |e: rand::distributions::WeightedError| Error::Domain(e.to_string());
        let root = WeightedIndex::new(&tables[0]).map_err(to_err)?;
        let m = window as i64;
        let mut bonds = Vec::with_capacity(n_bonds);
        for &(_, child) in tree.bond_nodes() {
            let h = &tables[child];
            let per_class = (0..q as i64)
                .map(|r| {
                    let w: Vec<f64> = (-m..=m)
                        .map(|zeta| {
                            pow_abs(theta, zeta) * h[(r + zeta).rem_euclid(q as i64) as usize]
                        })
                        .collect();
                    WeightedIndex::new(w).map_err(to_err)
                })
                .collect::<Result<Vec<_>>>()?;
            bonds.push(per_class);
        }
        Ok(Self {
            tree: tree.clone(),
            q,
            window,
            root,
            bonds,
            tail_bound,
        })
    }

    /// Bound on the total-variation distance between the window marginal
    /// and the untruncated one.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn tree(&self) -> &FiniteSubtree {
        &self.tree
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> GradientConfig {
        let nodes = self.tree.nodes().len();
        let mut class = vec![0usize; nodes];
        class[0] = self.root.sample(rng);
        let m = self.window as i64;
        let mut values = Vec::with_capacity(self.bonds.len());
        for (b, &(parent, child)) in self.tree.bond_nodes().iter().enumerate() {
            let r = class[parent];
            let zeta = self.bonds[b][r].sample(rng) as i64 - m;
            class[child] = (r as i64 + zeta).rem_euclid(self.q as i64) as usize;
            values.push(zeta);
        }
        GradientConfig::from_values(&self.tree, values).expect("one increment per bond")
    }

    /// `n` independent samples from a ChaCha stream seeded with `seed`.
    pub fn sample_many(&self, seed: u64, n: usize) -> Vec<GradientConfig> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| self.sample(&mut rng)).collect()
    }
}

/// `(Z - Z_M) / Z <= (z_max / z_min)^|dLambda| * (1 - (1 - t/F)^B)`.
fn relative_tail_bound<L: BoundaryWeights + ?Sized>(
    law: &L,
    tree: &FiniteSubtree,
    theta: f64,
    window: u32,
) -> Result<f64> {
    let f = full_sum(theta)?;
    let t = window_tail(theta, window);
    let z = law.weights();
    let ratio =
        z.iter().copied().fold(0.0, f64::max) / z.iter().copied().fold(f64::INFINITY, f64::min);
    let nb = tree.boundary().len() as i32;
    let b = tree.bonds().len() as i32;
    Ok(ratio.powi(nb) * (1.0 - (1.0 - t / f).powi(b)))
}

/// One sample of the window marginal, determined by `seed`.
pub fn sample_gradient<L: BoundaryWeights + ?Sized>(
    law: &L,
    tree: &FiniteSubtree,
    theta: f64,
    seed: u64,
    window: u32,
) -> Result<GradientConfig> {
    let sampler = GradientSampler::new(law, tree, theta, window)?;
    Ok(sampler.sample_many(seed, 1).remove(0))
}
