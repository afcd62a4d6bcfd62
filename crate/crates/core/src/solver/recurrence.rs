//! The normalized u-system
//!
//! ```text
//! u_i^k (u_-1 + u_1 - tau) = u_(i-1) + u_(i+1) - tau u_i,    u_0 = 1,
//! ```
//!
//! its two one-sided recurrences, and the one-sided weighted series
//! `l_0 = sum_(j<0) theta^|j| z_j`, `r_0 = sum_(j>0) theta^|j| z_j`.

use crate::error::{Error, Result};
use crate::model::{PeriodicBoundaryLaw, TemperatureParams};
use crate::tolerance;

/// The values `u_-N ..= u_N` of a u-sequence, with `u_0 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct USequenceWindow {
    values: Vec<f64>,
    half: usize,
    tau: f64,
    k: usize,
}

impl USequenceWindow {
    /// Builds a window from explicit values `u_-N ..= u_N` (odd length).
    pub fn new(values: Vec<f64>, tau: f64, k: usize) -> Result<Self> {
        if values.len().is_multiple_of(2) {
            return Err(Error::Domain("window length must be odd".into()));
        }
        if k < 2 {
            return Err(Error::InvalidOrder(k));
        }
        if !(tau > 2.0 && tau.is_finite()) {
            return Err(Error::InvalidTau(tau));
        }
        let half = values.len() / 2;
        if (values[half] - 1.0).abs() > tolerance::RELATIVE {
            return Err(Error::Domain(format!(
                "u_0 must be 1, got {}",
                values[half]
            )));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::Domain(format!(
                "window entries must be positive, found {v}"
            )));
        }
        Ok(Self {
            values,
            half,
            tau,
            k,
        })
    }

    /// The periodic u-sequence of `law` on `-n ..= n`.
    pub fn from_law(law: &PeriodicBoundaryLaw, tau: f64, n: usize) -> Result<Self> {
        let u = law.u();
        let q = u.len() as i64;
        let values = (-(n as i64)..=n as i64)
            .map(|i| u[i.rem_euclid(q) as usize])
            .collect();
        Self::new(values, tau, law.k())
    }

    pub fn half_width(&self) -> usize {
        self.half
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `u_i` for `|i| <= N`.
    pub fn get(&self, i: i64) -> f64 {
        self.values[(i + self.half as i64) as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `u_-1 + u_1 - tau`.
    pub fn denominator(&self) -> f64 {
        self.get(-1) + self.get(1) - self.tau
    }

    /// Copy of the window with `u_i` replaced.
    pub fn with_value(&self, i: i64, value: f64) -> Result<Self> {
        let mut values = self.values.clone();
        values[(i + self.half as i64) as usize] = value;
        Self::new(values, self.tau, self.k)
    }

    fn interior(&self) -> impl Iterator<Item = i64> {
        let n = self.half as i64;
        (1 - n)..n
    }
}

/// Generates `u_-n ..= u_n` from `u_0 = 1` and the seeds `u_-1`, `u_1` by
/// running the forward recurrence
/// `u_(i+1) = (u_-1 + u_1 - tau) u_i^k + tau u_i - u_(i-1)` and its mirror
/// image for negative indices.
pub fn recurrence_generate(
    u_minus1: f64,
    u_plus1: f64,
    tau: f64,
    k: usize,
    n: usize,
) -> Result<USequenceWindow> {
    if !(tau > 2.0 && tau.is_finite()) {
        return Err(Error::InvalidTau(tau));
    }
    if k < 2 {
        return Err(Error::InvalidOrder(k));
    }
    if n == 0 {
        return Err(Error::Domain("window half-width must be at least 1".into()));
    }
    for (index, value) in [(-1, u_minus1), (1, u_plus1)] {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::PositivityLost { index, value });
        }
    }
    let slope = u_minus1 + u_plus1 - tau;
    let kk = k as i32;
    let run = |first: f64, sign: i64| -> Result<Vec<f64>> {
        let mut seq = vec![1.0, first];
        for i in 1..n {
            let next = slope * seq[i].powi(kk) + tau * seq[i] - seq[i - 1];
            if !(next.is_finite() && next > 0.0) {
                return Err(Error::PositivityLost {
                    index: sign * (i as i64 + 1),
                    value: next,
                });
            }
            seq.push(next);
        }
        Ok(seq)
    };
    let forward = run(u_plus1, 1)?;
    let backward = run(u_minus1, -1)?;
    let values = backward
        .iter()
        .rev()
        .chain(forward.iter().skip(1))
        .copied()
        .collect();
    USequenceWindow::new(values, tau, k)
}

/// Largest violation of the normalized u-system over the interior of the
/// window: `max |u_i^k (u_-1 + u_1 - tau) - (u_(i-1) + u_(i+1) - tau u_i)|`.
pub fn residual_v(window: &USequenceWindow) -> Result<f64> {
    let denom = window.denominator();
    if denom.abs() <= tolerance::DEGENERATE {
        return Err(Error::DegenerateDenominator(denom));
    }
    let k = window.k as i32;
    let tau = window.tau;
    Ok(window
        .interior()
        .map(|i| {
            let lhs = window.get(i).powi(k) * denom;
            let rhs = window.get(i - 1) + window.get(i + 1) - tau * window.get(i);
            (lhs - rhs).abs()
        })
        .fold(0.0, f64::max))
}

/// The constant `C` of the un-normalized system
/// `u_(i-1) + u_(i+1) - tau u_i = C (theta - 1/theta) u_i^k`,
/// evaluated at `i = 0`, and the spread `max_i |C_i - C_0|` of the
/// pointwise values over the window interior.
pub fn check_u_constant(window: &USequenceWindow) -> Result<(f64, f64)> {
    let denom = window.denominator();
    if denom.abs() <= tolerance::DEGENERATE {
        return Err(Error::DegenerateDenominator(denom));
    }
    let temp = TemperatureParams::from_tau(window.tau)?;
    let gap = temp.theta_gap();
    let k = window.k as i32;
    let tau = window.tau;
    let c_at = |i: i64| {
        (window.get(i - 1) + window.get(i + 1) - tau * window.get(i))
            / (gap * window.get(i).powi(k))
    };
    let c0 = c_at(0);
    let spread = window
        .interior()
        .map(|i| (c_at(i) - c0).abs())
        .fold(0.0, f64::max);
    Ok((c0, spread))
}

/// One-sided weighted series at index 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SideSeries {
    /// `(theta - u_-1) / (u_-1 + u_1 - tau)`.
    pub l0: f64,
    /// `(theta - u_1) / (u_-1 + u_1 - tau)`.
    pub r0: f64,
    /// `sum_(m=1..=M) theta^m z_-m`.
    pub l0_truncated: f64,
    /// `sum_(m=1..=M) theta^m z_m`.
    pub r0_truncated: f64,
    /// Upper bound on the mass dropped by either truncated sum.
    pub tail_bound: f64,
    /// `|1 + l0 + r0 - (theta - 1/theta) / (u_-1 + u_1 - tau)|`.
    pub identity_gap: f64,
}

/// Window used by the truncated side series.
pub const SIDE_SERIES_WINDOW: usize = 400;

/// Closed-form side series of a periodic solution, cross-checked against the
/// truncated sums (window [`SIDE_SERIES_WINDOW`]) and the `1 + l0 + r0`
/// identity.
pub fn side_series(law: &PeriodicBoundaryLaw, temp: TemperatureParams) -> Result<SideSeries> {
    let theta = temp.theta();
    let u_m = law.u_value(-1);
    let u_p = law.u_value(1);
    let denom = u_m + u_p - temp.tau();
    if denom.abs() <= tolerance::DEGENERATE {
        return Err(Error::DegenerateDenominator(denom));
    }
    let l0 = (theta - u_m) / denom;
    let r0 = (theta - u_p) / denom;
    if !(l0 > 0.0 && r0 > 0.0) {
        return Err(Error::PositivityViolation { l0, r0 });
    }

    let m = SIDE_SERIES_WINDOW as i64;
    let mut l0_truncated = 0.0;
    let mut r0_truncated = 0.0;
    let mut weight = 1.0;
    for j in 1..=m {
        weight *= theta;
        l0_truncated += weight * law.value(-j);
        r0_truncated += weight * law.value(j);
    }
    let z_max = law.z().iter().copied().fold(0.0, f64::max);
    let tail_bound = z_max * theta.powi(m as i32 + 1) / (1.0 - theta);
    let rounding = |x: f64| 1e-12 * x.abs().max(1.0);
    for (closed, truncated, name) in [(l0, l0_truncated, "l0"), (r0, r0_truncated, "r0")] {
        let gap = closed - truncated;
        if gap < -rounding(closed) || gap > tail_bound + rounding(closed) {
            return Err(Error::SideSeriesMismatch(format!(
                "{name}: closed form {closed} vs truncated {truncated} (tail bound {tail_bound:e})"
            )));
        }
    }
    let identity_gap = (1.0 + l0 + r0 - temp.theta_gap() / denom).abs();
    if identity_gap > tolerance::IDENTITY {
        return Err(Error::SideSeriesMismatch(format!(
            "1 + l0 + r0 identity off by {identity_gap:e}"
        )));
    }
    Ok(SideSeries {
        l0,
        r0,
        l0_truncated,
        r0_truncated,
        tail_bound,
        identity_gap,
    })
}

/// `l_i = sum_(j<0) theta^|i-j| z_j` expressed through `l_0`.
pub fn left_series_at(law: &PeriodicBoundaryLaw, theta: f64, l0: f64, i: i64) -> f64 {
    if i >= 0 {
        return theta.powi(i as i32) * l0;
    }
    let correction: f64 = (i..=-1)
        .map(|j| (theta.powi((j - i) as i32) - theta.powi((i - j) as i32)) * law.value(j))
        .sum();
    theta.powi(i as i32) * l0 + correction
}

/// `r_i = sum_(j>0) theta^|i-j| z_j` expressed through `r_0`.
pub fn right_series_at(law: &PeriodicBoundaryLaw, theta: f64, r0: f64, i: i64) -> f64 {
    if i <= 0 {
        return theta.powi(-i as i32) * r0;
    }
    let correction: f64 = (1..=i)
        .map(|j| (theta.powi((i - j) as i32) - theta.powi((j - i) as i32)) * law.value(j))
        .sum();
    theta.powi(-i as i32) * r0 + correction
}
