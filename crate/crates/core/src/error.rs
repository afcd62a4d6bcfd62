use thiserror::Error;

use crate::tree::VertexId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("theta must lie in (0, 1), got {0}")]
    InvalidTheta(f64),
    #[error("tau must exceed 2, got {0}")]
    InvalidTau(f64),
    #[error("beta must be positive and finite, got {0}")]
    InvalidBeta(f64),
    #[error("period must be at least 1, got {0}")]
    InvalidPeriod(usize),
    #[error("tree order k must be at least 2, got {0}")]
    InvalidOrder(usize),
    #[error("residue {d} is not in [0, {q})")]
    InvalidResidue { d: usize, q: usize },
    #[error("invalid boundary law: {0}")]
    InvalidLaw(String),
    #[error("argument out of domain: {0}")]
    Domain(String),

    /// A generated term of the u-recurrence is not positive.
    #[error("u-recurrence lost positivity at index {index} (value {value})")]
    PositivityLost { index: i64, value: f64 },
    #[error("u_-1 + u_1 - tau vanishes ({0:e}); the normalized system is undefined")]
    DegenerateDenominator(f64),
    #[error("side series closed form is not positive: l0 = {l0}, r0 = {r0}")]
    PositivityViolation { l0: f64, r0: f64 },
    #[error("side series check failed: {0}")]
    SideSeriesMismatch(String),
    #[error("root finding did not converge on [{lo}, {hi}]")]
    Convergence { lo: f64, hi: f64 },

    #[error("edge list does not describe a tree: {0}")]
    NotATree(String),
    #[error("vertex {vertex} has degree {degree}, more than k + 1 = {max}")]
    DegreeExceeded {
        vertex: VertexId,
        degree: usize,
        max: usize,
    },
    #[error("vertex {0} is not an outer boundary vertex")]
    VertexNotInBoundary(VertexId),
    #[error("gradient configuration does not match the subtree: {0}")]
    ConfigMismatch(String),

    #[error("window truncation tail bound {tail:e} exceeds {limit:e}; enlarge the window")]
    WindowTooSmall { tail: f64, limit: f64 },
    #[error("subtree has {0} bonds, the sampler supports at most 64")]
    TooManyBonds(usize),

    #[error("classification conflict: {0}")]
    ClassificationConflict(String),
}
