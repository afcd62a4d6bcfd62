//! Residual of the boundary-law equation
//!
//! ```text
//! z_i = ( sum_j theta^|i-j| z_j / sum_j theta^|j| z_j )^k,   z_0 = 1,
//! ```
//!
//! for a periodic law. Grouping `j` by residue turns both infinite sums into
//! finite combinations of class sums, so the exact residual costs `O(q^2)`.

use crate::model::{class_sums, window_tail, PeriodicBoundaryLaw, TemperatureParams};

/// Maximum over one period of `|z_i - (N_i / D)^k|` with exact series.
pub fn verify_fixed_point(law: &PeriodicBoundaryLaw, temp: TemperatureParams) -> f64 {
    let q = law.period();
    let z = law.z();
    let cs = class_sums(temp.theta(), q).expect("theta validated by TemperatureParams");
    let series = |i: usize| -> f64 { (0..q).map(|d| z[d] * cs[(d + q - i) % q]).sum() };
    let denom = series(0);
    (0..q)
        .map(|i| (z[i] - (series(i) / denom).powi(law.k() as i32)).abs())
        .fold(0.0, f64::max)
}

/// Result of the truncated evaluation of the boundary-law equation.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedResidual {
    /// `max_i |z_i - (N_i^M / D^M)^k|` with sums cut to `|j - i| <= M`.
    pub residual: f64,
    /// Bound on how far the truncated residual can sit from the exact one.
    pub tail_bound: f64,
}

/// Residual of the boundary-law equation with every series summed directly
/// over `|j - i| <= window`, together with the propagated truncation bound.
///
/// Each truncated sum misses at most `eps = z_max * 2 theta^(M+1) / (1 - theta)`.
/// With `N' <= N <= N' + eps` and `D' <= D <= D' + eps` the ratio moves by at
/// most `delta = eps (1 + N'/D') / D'` and its `k`-th power by at most
/// `k (N'/D' + delta)^(k-1) delta`.
pub fn verify_fixed_point_truncated(
    law: &PeriodicBoundaryLaw,
    temp: TemperatureParams,
    window: u32,
) -> TruncatedResidual {
    let theta = temp.theta();
    let k = law.k() as i32;
    let m = window as i64;
    let truncated = |i: i64| -> f64 {
        (-m..=m)
            .map(|off| theta.powi(off.unsigned_abs() as i32) * law.value(i + off))
            .sum()
    };
    let z_max = law.z().iter().copied().fold(0.0, f64::max);
    let eps = z_max * window_tail(theta, window);
    let denom = truncated(0);
    let mut residual: f64 = 0.0;
    let mut tail_bound: f64 = 0.0;
    for i in 0..law.period() as i64 {
        let ratio = truncated(i) / denom;
        residual = residual.max((law.value(i) - ratio.powi(k)).abs());
        let delta = eps * (1.0 + ratio) / denom;
        tail_bound = tail_bound.max(k as f64 * (ratio + delta).powi(k - 1) * delta);
    }
    TruncatedResidual {
        residual,
        tail_bound,
    }
}
