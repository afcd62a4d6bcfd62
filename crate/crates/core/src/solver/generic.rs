//! Newton iteration for arbitrary periods.
//!
//! Imposing `u_(i+q) = u_i` with `u_0 = 1` turns the forward recurrence into
//! `q - 1` equations in `u_1, ..., u_(q-1)`:
//!
//! ```text
//! F_i = (u_(q-1) + u_1 - tau) u_i^k + tau u_i - u_(i-1) - u_(i+1) = 0,
//! ```
//!
//! where `u_-1 = u_(q-1)` and `u_q = 1`.

use nalgebra::{DMatrix, DVector};

use super::recurrence::{residual_v, USequenceWindow};
use crate::model::PeriodicBoundaryLaw;
use crate::tolerance;

/// Largest period accepted by [`solve_periodic_generic`].
pub const MAX_GENERIC_PERIOD: usize = 12;
const MAX_NEWTON: usize = 100;

struct PeriodicSystem {
    q: usize,
    tau: f64,
    k: usize,
}

impl PeriodicSystem {
    /// Full periodic vector `u_0 ..= u_(q-1)` from the unknowns.
    fn expand(&self, x: &DVector<f64>) -> Vec<f64> {
        std::iter::once(1.0).chain(x.iter().copied()).collect()
    }

    fn residual(&self, x: &DVector<f64>) -> DVector<f64> {
        let u = self.expand(x);
        let q = self.q;
        let slope = u[q - 1] + u[1] - self.tau;
        DVector::from_iterator(
            q - 1,
            (1..q).map(|i| {
                slope * u[i].powi(self.k as i32) + self.tau * u[i] - u[i - 1] - u[(i + 1) % q]
            }),
        )
    }

    fn jacobian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let u = self.expand(x);
        let q = self.q;
        let n = q - 1;
        let k = self.k as i32;
        let slope = u[q - 1] + u[1] - self.tau;
        let mut jac = DMatrix::zeros(n, n);
        for i in 1..q {
            let row = i - 1;
            let uk = u[i].powi(k);
            jac[(row, i - 1)] += slope * self.k as f64 * u[i].powi(k - 1) + self.tau;
            // u_1 and u_(q-1) enter through the slope
            jac[(row, 0)] += uk;
            jac[(row, n - 1)] += uk;
            if i >= 2 {
                jac[(row, i - 2)] -= 1.0;
            }
            if i + 1 < q {
                jac[(row, i)] -= 1.0;
            }
        }
        jac
    }
}

fn max_abs(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Damped Newton solve for a positive `q`-periodic solution starting from
/// `seeds = (u_1, ..., u_(q-1))`. Returns `None` when the iteration stalls,
/// leaves the positive cone, or lands on a solution with
/// `u_-1 + u_1 >= tau` (which does not come from a positive boundary law).
pub fn solve_periodic_generic(
    q: usize,
    tau: f64,
    k: usize,
    seeds: &[f64],
) -> Option<PeriodicBoundaryLaw> {
    if q == 0 || q > MAX_GENERIC_PERIOD || k < 2 || !(tau > 2.0 && tau.is_finite()) {
        return None;
    }
    if q == 1 {
        return PeriodicBoundaryLaw::trivial(k).ok();
    }
    if seeds.len() != q - 1 || seeds.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return None;
    }
    let system = PeriodicSystem { q, tau, k };
    let mut x = DVector::from_column_slice(seeds);
    let mut f = system.residual(&x);
    for _ in 0..MAX_NEWTON {
        if max_abs(&f) <= 1e-14 {
            break;
        }
        let step = system.jacobian(&x).lu().solve(&f)?;
        let mut lambda = 1.0;
        let current = max_abs(&f);
        let mut accepted = false;
        for _ in 0..40 {
            let trial = &x - &step * lambda;
            if trial.iter().all(|v| *v > 0.0 && v.is_finite()) {
                let ft = system.residual(&trial);
                if max_abs(&ft) < current || max_abs(&ft) <= 1e-14 {
                    x = trial;
                    f = ft;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }

    let u = system.expand(&x);
    if u[q - 1] + u[1] >= tau {
        return None;
    }
    let window_values: Vec<f64> = (-(2 * q as i64)..=2 * q as i64)
        .map(|i| u[i.rem_euclid(q as i64) as usize])
        .collect();
    let window = USequenceWindow::new(window_values, tau, k).ok()?;
    if residual_v(&window).ok()? > tolerance::IDENTITY {
        return None;
    }
    PeriodicBoundaryLaw::from_u(k, &u).ok()
}
