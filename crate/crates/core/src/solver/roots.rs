//! Bracketed scalar root finding: bisection safeguarded Newton steps.

use crate::error::{Error, Result};

const MAX_ITER: usize = 400;

/// Finds a root of `f` in `[lo, hi]`, where `f(lo)` and `f(hi)` have opposite
/// signs. `f` returns the value and derivative. Newton steps that leave the
/// current bracket or fail to halve it are replaced by bisection.
pub(crate) fn bracketed_root<F>(f: F, lo: f64, hi: f64) -> Result<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    let (flo, _) = f(lo);
    let (fhi, _) = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Convergence { lo, hi });
    }
    // orient so that f(a) < 0 < f(b)
    let (mut a, mut b) = if flo < 0.0 { (lo, hi) } else { (hi, lo) };
    let mut x = 0.5 * (lo + hi);
    let mut dx_old = (hi - lo).abs();
    let mut dx = dx_old;
    let (mut fx, mut dfx) = f(x);
    for _ in 0..MAX_ITER {
        let newton_ok = dfx != 0.0 && {
            let next = x - fx / dfx;
            (next - a) * (next - b) < 0.0 && (2.0 * fx).abs() <= (dx_old * dfx).abs()
        };
        dx_old = dx;
        if newton_ok {
            dx = fx / dfx;
            x -= dx;
        } else {
            dx = 0.5 * (b - a);
            x = a + dx;
        }
        if dx.abs() <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
            return Ok(x);
        }
        let (nfx, ndfx) = f(x);
        fx = nfx;
        dfx = ndfx;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            a = x;
        } else {
            b = x;
        }
        if (b - a).abs() <= 2.0 * f64::EPSILON * x.abs() {
            return Ok(x);
        }
    }
    Err(Error::Convergence { lo, hi })
}

/// Doubles `start` until `pred` holds; gives up after 200 doublings.
pub(crate) fn expand_up(start: f64, pred: impl Fn(f64) -> bool) -> Option<f64> {
    let mut x = start;
    for _ in 0..200 {
        if pred(x) {
            return Some(x);
        }
        x *= 2.0;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bracketed_root(|x| (x * x - 2.0, 2.0 * x), 0.0, 2.0).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn works_with_reversed_orientation() {
        let r = bracketed_root(|x| (1.0 - x * x * x, -3.0 * x * x), 0.0, 5.0).unwrap();
        assert!((r - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_missing_sign_change() {
        assert!(bracketed_root(|x| (x * x + 1.0, 2.0 * x), -1.0, 1.0).is_err());
    }

    #[test]
    fn survives_zero_derivative() {
        // derivative vanishes at the bracket midpoint
        let r = bracketed_root(|x| (x * x * x - 0.001, 3.0 * x * x), -1.0, 1.0).unwrap();
        assert!((r - 0.1).abs() < 1e-14);
    }
}
