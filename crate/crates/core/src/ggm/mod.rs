//! Finite-volume marginals of the gradient Gibbs measure built from a
//! periodic boundary law.
//!
//! For a subtree `Lambda` with outer boundary `dLambda` the marginal on the
//! bonds meeting `Lambda` is
//!
//! ```text
//! nu(zeta) = Z^-1 * sum_(s in Z_q) prod_(y in dLambda) z(s + path_sum(y)) * prod_b theta^|zeta_b|
//! ```
//!
//! The normalizer `Z` is an infinite sum over configurations. Because `z` is
//! `q`-periodic it collapses, bond by bond, to a residue-class recursion (see
//! [`messages`]).

pub mod marginals;
pub mod messages;
pub mod sampler;
pub mod weights;

pub use marginals::{
    configuration_probability, marginal_table, single_bond_marginal, transition_probability,
    two_bond_marginal, MarginalTable,
};
pub use messages::{
    partition_function, partition_function_windowed, partition_tail_bound, pinned_normalizers,
    windowed_class_sums, ClassMessage,
};
pub use sampler::{sample_gradient, GradientSampler};
pub use weights::{marginal_weight, n_vector_weight, pinned_weight};

use crate::error::{Error, Result};
use crate::model::{check_weights, PeriodicBoundaryLaw};

/// Positive `q`-periodic height weights together with the tree order `k`.
pub trait BoundaryWeights {
    fn order(&self) -> usize;
    /// One period of weights, indexed by residue.
    fn weights(&self) -> &[f64];

    fn period(&self) -> usize {
        self.weights().len()
    }

    fn at(&self, residue: i64) -> f64 {
        let z = self.weights();
        z[residue.rem_euclid(z.len() as i64) as usize]
    }
}

impl BoundaryWeights for PeriodicBoundaryLaw {
    fn order(&self) -> usize {
        self.k()
    }

    fn weights(&self) -> &[f64] {
        self.z()
    }
}

/// Periodic weights without the `z_0 = 1` normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct RawWeights {
    k: usize,
    z: Vec<f64>,
}

impl RawWeights {
    pub fn new(k: usize, z: Vec<f64>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidOrder(k));
        }
        check_weights(&z)?;
        Ok(Self { k, z })
    }
}

impl BoundaryWeights for RawWeights {
    fn order(&self) -> usize {
        self.k
    }

    fn weights(&self) -> &[f64] {
        &self.z
    }
}
