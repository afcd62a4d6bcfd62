//! Closed-form and bracketed solutions of the periodic families.
//!
//! * `u = (1, a, 1, b)` repeated (period 4, binary tree): `a` and `b` solve
//!   `(a + b - tau) x^2 + tau x - 2 = 0` for `x in {a, b}`. Subtracting the two
//!   equations leaves `a = b` or `a + b = (tau +- sqrt(tau^2 - 4 tau)) / 2`.
//!   The diagonal `a = b` gives `2a^3 - tau a^2 + tau a - 2 = 0`.
//! * `u = (1, a, a)` repeated (period 3, any `k`): after removing the root
//!   `a = 1`, `2a^k + (2 - tau)(a^(k-1) + ... + a) + 1 = 0`, equivalently
//!   `tau = psi_k(a)`.

use super::roots::{bracketed_root, expand_up};
use crate::error::{Error, Result};
use crate::tolerance;

/// `tau` at which the diagonal pair `a1 = a2` branches off `a = 1`.
pub const TAU_TWO_PERIODIC: f64 = 6.0;
/// `tau` from which `a + b = (tau + sqrt(tau^2 - 4 tau)) / 2` has real roots.
pub const TAU_FOUR_PERIODIC: f64 = 4.0;

/// `2 + 2 sqrt(5)`: from here on the pair `(a5, b5)` exists.
pub fn tau_five_solutions() -> f64 {
    2.0 + 2.0 * 5f64.sqrt()
}

fn check_tau(tau: f64) -> Result<()> {
    if tau.is_finite() && tau > 2.0 {
        Ok(())
    } else {
        Err(Error::InvalidTau(tau))
    }
}

fn check_order(k: usize) -> Result<()> {
    if k >= 2 {
        Ok(())
    } else {
        Err(Error::InvalidOrder(k))
    }
}

/// Value of `2a^3 - tau a^2 + tau a - 2`.
pub fn diagonal_polynomial(a: f64, tau: f64) -> f64 {
    ((2.0 * a - tau) * a + tau) * a - 2.0
}

/// Positive roots of `2a^3 - tau a^2 + tau a - 2 = 0`: `[1]` for `tau <= 6`,
/// otherwise `[1, a1, a2]` with `a1 a2 = 1`.
pub fn solve_2periodic(tau: f64) -> Result<Vec<f64>> {
    check_tau(tau)?;
    let mut roots = vec![1.0];
    if tau > TAU_TWO_PERIODIC {
        let t = tau - 2.0;
        let disc = (t * t - 16.0).sqrt();
        roots.push((t - disc) / 4.0);
        roots.push((t + disc) / 4.0);
    }
    Ok(roots)
}

/// Residuals of the two period-4 equations at `(a, b)` for the binary tree.
pub fn four_periodic_residual(a: f64, b: f64, tau: f64) -> (f64, f64) {
    let s = a + b - tau;
    (s * b * b + tau * b - 2.0, s * a * a + tau * a - 2.0)
}

/// Which branch of the period-4 family a pair belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FourPeriodicKind {
    Trivial,
    /// `a = b = a1 < 1`.
    DiagonalLow,
    /// `a = b = a2 = 1 / a1`.
    DiagonalHigh,
    /// `a + b = (tau + sqrt(tau^2 - 4 tau)) / 2`.
    SumPlus,
    /// `a + b = (tau - sqrt(tau^2 - 4 tau)) / 2`.
    SumMinus,
}

/// A solution `(a, b)`, `a <= b`, of the period-4 system on the binary tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourPeriodicPair {
    pub kind: FourPeriodicKind,
    pub a: f64,
    pub b: f64,
}

/// Roots `(x1, x2)`, `x1 <= x2`, of `(tau -+ S) x^2 - 2 tau x + 4 = 0`, which
/// fix one coordinate on the branch `a + b = (tau +- S) / 2`,
/// `S = sqrt(tau^2 - 4 tau)`. `inner` is `S^2 +- 4S`.
fn sum_branch(tau: f64, lead: f64, inner: f64) -> (f64, f64) {
    // rounding can push a vanishing discriminant slightly negative at the
    // branch point; the threshold test has already decided existence
    let r = inner.max(0.0).sqrt();
    ((tau - r) / lead, (tau + r) / lead)
}

/// All solutions of the period-4 family for `k = 2`, one per cyclic class,
/// in the order trivial, `a1`, `a2`, `(a3, b3)`, `(a5, b5)`.
///
/// * `tau <= 4`: only `(1, 1)`;
/// * `4 < tau <= 6`: adds `(a3, b3)`;
/// * `6 < tau < 2 + 2 sqrt 5`: adds `(a1, a1)` and `(a2, a2)`;
/// * `tau >= 2 + 2 sqrt 5`: adds `(a5, b5)`.
pub fn solve_4periodic(tau: f64) -> Result<Vec<FourPeriodicPair>> {
    check_tau(tau)?;
    let mut out = vec![FourPeriodicPair {
        kind: FourPeriodicKind::Trivial,
        a: 1.0,
        b: 1.0,
    }];
    if tau > TAU_TWO_PERIODIC {
        let roots = solve_2periodic(tau)?;
        for (kind, a) in [
            (FourPeriodicKind::DiagonalLow, roots[1]),
            (FourPeriodicKind::DiagonalHigh, roots[2]),
        ] {
            out.push(FourPeriodicPair { kind, a, b: a });
        }
    }
    if tau > TAU_FOUR_PERIODIC {
        let s = (tau * tau - 4.0 * tau).sqrt();
        let (a3, b3) = sum_branch(tau, tau - s, s * s + 4.0 * s);
        out.push(FourPeriodicPair {
            kind: FourPeriodicKind::SumPlus,
            a: a3,
            b: b3,
        });
        if tau >= tau_five_solutions() {
            let (a5, b5) = sum_branch(tau, tau + s, s * s - 4.0 * s);
            out.push(FourPeriodicPair {
                kind: FourPeriodicKind::SumMinus,
                a: a5,
                b: b5,
            });
        }
    }
    Ok(out)
}

/// `a^(k-1) + a^(k-2) + ... + a`.
fn power_sum(a: f64, k: usize) -> f64 {
    (1..k).map(|j| a.powi(j as i32)).sum()
}

/// `psi_k(a) = 2 + (2a^k + 1) / (a^(k-1) + ... + a)`; the value of `tau` for
/// which `(1, a, a)` is a period-3 solution.
pub fn psi_k(a: f64, k: usize) -> Result<f64> {
    check_order(k)?;
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::Domain(format!("psi_k needs a > 0, got {a}")));
    }
    Ok(2.0 + (2.0 * a.powi(k as i32) + 1.0) / power_sum(a, k))
}

/// `tau_0(k) = (2k + 1) / (k - 1) = psi_k(1)`.
pub fn tau_0(k: usize) -> Result<f64> {
    check_order(k)?;
    Ok((2 * k + 1) as f64 / (k - 1) as f64)
}

/// Numerator of `psi_k'`, up to a positive factor:
/// `2 sum_(j=1)^(k-1) (k-j) a^(k+j-1) - sum_(j=1)^(k-1) j a^(j-1)`,
/// with its derivative.
fn critical_polynomial(a: f64, k: usize) -> (f64, f64) {
    let mut value = 0.0;
    let mut deriv = 0.0;
    for j in 1..k {
        let c = 2.0 * (k - j) as f64;
        let e = (k + j - 1) as i32;
        value += c * a.powi(e);
        deriv += c * e as f64 * a.powi(e - 1);
        let jf = j as f64;
        value -= jf * a.powi(j as i32 - 1);
        if j >= 2 {
            deriv -= jf * (j as f64 - 1.0) * a.powi(j as i32 - 2);
        }
    }
    (value, deriv)
}

/// Minimum of `psi_k` over `a > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub tau_c: f64,
    pub a_star: f64,
}

/// The unique positive root `a*` of the critical polynomial (negative at 0,
/// positive for large `a`) and `tau_c = psi_k(a*)`.
pub fn tau_c(k: usize) -> Result<CriticalPoint> {
    check_order(k)?;
    let hi = expand_up(1.0, |a| critical_polynomial(a, k).0 > 0.0).ok_or(Error::Convergence {
        lo: 0.0,
        hi: f64::INFINITY,
    })?;
    let a_star = bracketed_root(|a| critical_polynomial(a, k), 0.0, hi)?;
    let tau_c = psi_k(a_star, k)?;
    let t0 = tau_0(k)?;
    if tau_c.is_nan() || tau_c >= t0 {
        return Err(Error::Convergence { lo: 0.0, hi });
    }
    Ok(CriticalPoint { tau_c, a_star })
}

/// `2a^k + (2 - tau)(a^(k-1) + ... + a) + 1` and its derivative.
fn three_periodic_polynomial(a: f64, tau: f64, k: usize) -> (f64, f64) {
    let kk = k as i32;
    let mut value = 2.0 * a.powi(kk) + 1.0;
    let mut deriv = 2.0 * k as f64 * a.powi(kk - 1);
    for j in 1..k {
        value += (2.0 - tau) * a.powi(j as i32);
        deriv += (2.0 - tau) * j as f64 * a.powi(j as i32 - 1);
    }
    (value, deriv)
}

/// Sum of absolute values of the terms of the period-3 polynomial at `a`.
fn three_periodic_scale(a: f64, tau: f64, k: usize) -> f64 {
    2.0 * a.powi(k as i32) + 1.0 + (tau - 2.0) * power_sum(a, k)
}

/// Residual of the period-3 polynomial relative to the size of its terms.
pub fn three_periodic_relative_residual(a: f64, tau: f64, k: usize) -> f64 {
    three_periodic_polynomial(a, tau, k).0.abs() / three_periodic_scale(a, tau, k)
}

/// Positive roots `a` of `2a^k + (2 - tau)(a^(k-1) + ... + a) + 1 = 0`, in
/// ascending order: none below `tau_c(k)`, the single root `a*` at `tau_c`,
/// two roots above it. At `tau = tau_0(k)` one of them is `a = 1`.
pub fn solve_3periodic(tau: f64, k: usize) -> Result<Vec<f64>> {
    check_tau(tau)?;
    let crit = tau_c(k)?;
    if (tau - crit.tau_c).abs() <= tolerance::THRESHOLD {
        return Ok(vec![crit.a_star]);
    }
    if tau < crit.tau_c {
        return Ok(Vec::new());
    }
    let f = |a: f64| three_periodic_polynomial(a, tau, k);
    // f = (psi_k - tau) * (a^(k-1) + ... + a), negative at a* above tau_c
    if f(crit.a_star).0 >= 0.0 {
        return Ok(vec![crit.a_star]);
    }
    let low = bracketed_root(f, 0.0, crit.a_star)?;
    let hi = expand_up(2.0 * crit.a_star, |a| f(a).0 > 0.0).ok_or(Error::Convergence {
        lo: crit.a_star,
        hi: f64::INFINITY,
    })?;
    let high = bracketed_root(f, crit.a_star, hi)?;
    Ok(vec![low, high])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn two_periodic_examples() {
        assert_eq!(solve_2periodic(5.0).unwrap(), vec![1.0]);
        assert_eq!(solve_2periodic(6.0).unwrap(), vec![1.0]);
        let r = solve_2periodic(7.0).unwrap();
        assert_eq!(r.len(), 3);
        assert!(close(r[1], 0.5, 1e-15) && close(r[2], 2.0, 1e-15));
        for a in r {
            assert!(diagonal_polynomial(a, 7.0).abs() <= 1e-12);
        }
        assert!(solve_2periodic(2.0).is_err());
    }

    #[test]
    fn four_periodic_examples() {
        assert_eq!(solve_4periodic(3.0).unwrap().len(), 1);
        let at5 = solve_4periodic(5.0).unwrap();
        assert_eq!(at5.len(), 2);
        let p = at5[1];
        assert!(close(p.a + p.b, (5.0 + 5f64.sqrt()) / 2.0, 1e-12));
        let at7 = solve_4periodic(7.0).unwrap();
        assert_eq!(at7.len(), 5);
        let p5 = at7[4];
        assert_eq!(p5.kind, FourPeriodicKind::SumMinus);
        assert!(close(p5.a, 0.4633, 1e-4) && close(p5.b, 0.7454, 1e-4));
        assert!(close(p5.a + p5.b, (7.0 - 21f64.sqrt()) / 2.0, 1e-12));
        for p in at7 {
            assert!(p.a <= p.b);
            let (r1, r2) = four_periodic_residual(p.a, p.b, 7.0);
            assert!(r1.abs() <= 1e-10 && r2.abs() <= 1e-10, "{p:?}");
        }
    }

    #[test]
    fn four_periodic_at_four_has_no_extra_pair() {
        assert_eq!(solve_4periodic(4.0).unwrap().len(), 1);
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi_k(1.0, 2).unwrap(), 5.0);
        assert!(close(
            psi_k(0.5f64.sqrt(), 2).unwrap(),
            2.0 + 2.0 * 2f64.sqrt(),
            1e-14
        ));
        assert!(close(psi_k(1.0, 3).unwrap(), 3.5, 1e-15));
        assert!(psi_k(0.0, 2).is_err());
        assert!(psi_k(1.0, 1).is_err());
    }

    #[test]
    fn tau_c_binary_tree() {
        let c = tau_c(2).unwrap();
        assert!(close(c.tau_c, 2.0 * (1.0 + 2f64.sqrt()), 1e-12));
        assert!(close(c.a_star, 0.5f64.sqrt(), 1e-14));
        assert!(c.tau_c < tau_0(2).unwrap());
    }

    #[test]
    fn tau_c_is_a_local_minimum() {
        for k in 3..=6 {
            let c = tau_c(k).unwrap();
            assert!(c.tau_c < tau_0(k).unwrap());
            let left = psi_k(c.a_star - 1e-4, k).unwrap();
            let right = psi_k(c.a_star + 1e-4, k).unwrap();
            assert!(left > c.tau_c && right > c.tau_c, "k = {k}");
        }
    }

    #[test]
    fn three_periodic_examples() {
        assert!(solve_3periodic(4.0, 2).unwrap().is_empty());
        let at5 = solve_3periodic(5.0, 2).unwrap();
        assert!(close(at5[0], 0.5, 1e-14) && close(at5[1], 1.0, 1e-14));
        let at6 = solve_3periodic(6.0, 2).unwrap();
        assert!(close(at6[0], (4.0 - 8f64.sqrt()) / 4.0, 1e-14));
        assert!(close(at6[1], (4.0 + 8f64.sqrt()) / 4.0, 1e-14));
    }

    #[test]
    fn three_periodic_matches_binary_closed_form() {
        for i in 0..50 {
            let tau = 4.9 + 0.1 * i as f64;
            let roots = solve_3periodic(tau, 2).unwrap();
            let t = tau - 2.0;
            let disc = (t * t - 8.0).sqrt();
            assert!(close(roots[0], (t - disc) / 4.0, 1e-12));
            assert!(close(roots[1], (t + disc) / 4.0, 1e-12));
        }
    }

    #[test]
    fn critical_polynomial_derivative_is_consistent() {
        for k in 2..=5 {
            for a in [0.3, 0.9, 1.7] {
                let h = 1e-6;
                let fd =
                    (critical_polynomial(a + h, k).0 - critical_polynomial(a - h, k).0) / (2.0 * h);
                let (_, d) = critical_polynomial(a, k);
                assert!((fd - d).abs() <= 1e-5 * d.abs().max(1.0), "k={k} a={a}");
            }
        }
    }
}
