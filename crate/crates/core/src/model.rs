//! Temperature parametrisation, periodic boundary laws and the SOS transfer
//! operator.
//!
//! The bond weight of the SOS model at inverse temperature `beta` is
//! `theta^|zeta|` with `theta = exp(-beta)`, where `zeta` is the height
//! increment along the bond. Because a periodic boundary law only depends on
//! heights modulo its period, every infinite sum that appears downstream can
//! be collapsed to a finite sum over residue classes with [`class_sum`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance;

/// Inverse temperature, stored canonically as `theta = exp(-beta)`.
///
/// Every threshold of the model is expressed in `tau = theta + 1/theta =
/// 2 cosh(beta)`, so the type can be built from any of the three.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemperatureParams {
    theta: f64,
}

impl TemperatureParams {
    pub fn from_theta(theta: f64) -> Result<Self> {
        check_theta(theta)?;
        Ok(Self { theta })
    }

    pub fn from_beta(beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidBeta(beta));
        }
        Self::from_theta((-beta).exp()).map_err(|_| Error::InvalidBeta(beta))
    }

    /// Smaller root of `theta^2 - tau theta + 1 = 0`, written in the
    /// cancellation-free form `2 / (tau + sqrt(tau^2 - 4))`.
    pub fn from_tau(tau: f64) -> Result<Self> {
        if !(tau.is_finite() && tau > 2.0) {
            return Err(Error::InvalidTau(tau));
        }
        let theta = 2.0 / (tau + (tau * tau - 4.0).sqrt());
        Self::from_theta(theta).map_err(|_| Error::InvalidTau(tau))
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn beta(&self) -> f64 {
        -self.theta.ln()
    }

    pub fn tau(&self) -> f64 {
        self.theta + self.theta.recip()
    }

    /// `theta - 1/theta`, the constant multiplying `u_i^k` in the
    /// three-term form of the boundary-law equation.
    pub fn theta_gap(&self) -> f64 {
        self.theta - self.theta.recip()
    }
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if theta.is_finite() && theta > 0.0 && theta < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidTheta(theta))
    }
}

/// Bond weight `theta^|zeta|`.
pub fn transfer_weight(theta: f64, zeta: i64) -> Result<f64> {
    check_theta(theta)?;
    Ok(pow_abs(theta, zeta))
}

#[inline]
pub(crate) fn pow_abs(theta: f64, zeta: i64) -> f64 {
    theta.powi(zeta.unsigned_abs().min(i32::MAX as u64) as i32)
}

/// `sum over zeta = d (mod q) of theta^|zeta|`.
///
/// Non-negative members of the class are `d + mq` and negative ones have
/// absolute value `q - d + mq`, which gives
/// `(theta^d + theta^(q-d)) / (1 - theta^q)` for `d > 0` and
/// `(1 + theta^q) / (1 - theta^q)` for `d = 0`.
pub fn class_sum(theta: f64, q: usize, d: usize) -> Result<f64> {
    check_theta(theta)?;
    if q == 0 {
        return Err(Error::InvalidPeriod(q));
    }
    if d >= q {
        return Err(Error::InvalidResidue { d, q });
    }
    Ok(class_sum_unchecked(theta, q, d))
}

pub(crate) fn class_sum_unchecked(theta: f64, q: usize, d: usize) -> f64 {
    let tq = theta.powi(q as i32);
    let denom = 1.0 - tq;
    if d == 0 {
        (1.0 + tq) / denom
    } else {
        (theta.powi(d as i32) + theta.powi((q - d) as i32)) / denom
    }
}

/// All residue-class sums for period `q`, indexed by residue.
pub fn class_sums(theta: f64, q: usize) -> Result<Vec<f64>> {
    check_theta(theta)?;
    if q == 0 {
        return Err(Error::InvalidPeriod(q));
    }
    Ok((0..q).map(|d| class_sum_unchecked(theta, q, d)).collect())
}

/// `sum over all integers of theta^|zeta| = (1 + theta) / (1 - theta)`.
pub fn full_sum(theta: f64) -> Result<f64> {
    check_theta(theta)?;
    Ok((1.0 + theta) / (1.0 - theta))
}

/// Mass of `theta^|zeta|` outside the window `|zeta| <= m`:
/// `2 theta^(m+1) / (1 - theta)`.
pub fn window_tail(theta: f64, m: u32) -> f64 {
    2.0 * theta.powi(m as i32 + 1) / (1.0 - theta)
}

/// A spatially homogeneous boundary law that is periodic in the height
/// variable, stored in z-representation and normalized to `z_0 = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicBoundaryLaw {
    k: usize,
    z: Vec<f64>,
}

impl PeriodicBoundaryLaw {
    /// Builds a law from its z-values; requires `z_0 = 1` to within
    /// [`tolerance::RELATIVE`].
    pub fn new(k: usize, z: Vec<f64>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidOrder(k));
        }
        check_weights(&z)?;
        if (z[0] - 1.0).abs() > tolerance::RELATIVE {
            return Err(Error::InvalidLaw(format!("z_0 must be 1, got {}", z[0])));
        }
        let mut z = z;
        z[0] = 1.0;
        Ok(Self { k, z })
    }

    /// Builds a law from arbitrary positive values, dividing by `z_0`.
    pub fn normalized(k: usize, z: Vec<f64>) -> Result<Self> {
        check_weights(&z)?;
        let z0 = z[0];
        Self::new(k, z.into_iter().map(|v| v / z0).collect())
    }

    /// Builds a law from u-values with `u_i^k = z_i`.
    pub fn from_u(k: usize, u: &[f64]) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidOrder(k));
        }
        check_weights(u)?;
        Self::normalized(k, u.iter().map(|v| v.powi(k as i32)).collect())
    }

    /// The constant law `z = 1`.
    pub fn trivial(k: usize) -> Result<Self> {
        Self::new(k, vec![1.0])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn period(&self) -> usize {
        self.z.len()
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn u(&self) -> Vec<f64> {
        let inv = 1.0 / self.k as f64;
        self.z.iter().map(|v| v.powf(inv)).collect()
    }

    /// `z_i` for any integer height `i`.
    pub fn value(&self, i: i64) -> f64 {
        self.z[i.rem_euclid(self.z.len() as i64) as usize]
    }

    /// `u_i` for any integer height `i`.
    pub fn u_value(&self, i: i64) -> f64 {
        self.value(i).powf(1.0 / self.k as f64)
    }

    /// The same law viewed as a law of period `period`, which must be a
    /// multiple of the current period.
    pub fn embed(&self, period: usize) -> Result<Self> {
        let q = self.period();
        if period == 0 || !period.is_multiple_of(q) {
            return Err(Error::InvalidPeriod(period));
        }
        Ok(Self {
            k: self.k,
            z: (0..period).map(|i| self.z[i % q]).collect(),
        })
    }
}

pub(crate) fn check_weights(z: &[f64]) -> Result<()> {
    if z.is_empty() {
        return Err(Error::InvalidPeriod(0));
    }
    if let Some(v) = z.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::InvalidLaw(format!(
            "values must be positive and finite, found {v}"
        )));
    }
    Ok(())
}

/// Outcome of the normalisability test.
#[derive(Debug, Clone, PartialEq)]
pub enum Normalisability {
    Normalisable,
    /// The series `sum_i z_i^((k+1)/k)` diverges: every block of one period
    /// contributes the same positive amount `per_period_sum`.
    NonNormalisable {
        per_period_sum: f64,
    },
}

/// A homogeneous law is normalisable iff `sum over i in Z of z_i^((k+1)/k)`
/// is finite. For a positive periodic law the series is a sum of infinitely
/// many copies of one positive block, so it never converges.
pub fn normalisability_check(law: &PeriodicBoundaryLaw) -> Normalisability {
    let exponent = (law.k() as f64 + 1.0) / law.k() as f64;
    let per_period_sum: f64 = law.z().iter().map(|z| z.powf(exponent)).sum();
    if per_period_sum > 0.0 {
        Normalisability::NonNormalisable { per_period_sum }
    } else {
        Normalisability::Normalisable
    }
}
