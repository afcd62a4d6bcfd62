//! Periodic boundary laws and gradient Gibbs measures for the SOS model on
//! regular trees.

pub mod cli;
pub mod error;
pub mod ggm;
pub mod identify;
pub mod model;
pub mod solver;
pub mod tolerance;
pub mod tree;

pub use error::{Error, Result};
pub use model::{PeriodicBoundaryLaw, TemperatureParams};
