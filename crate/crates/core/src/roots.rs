//! Bracketed scalar root finding.

use crate::error::{Error, Result};

/// Stopping rule for [`bisect`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    /// Accept a point once `|f(x)|` is at or below this value.
    pub residual: f64,
    pub max_iterations: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            residual: 1e-12,
            max_iterations: 4000,
        }
    }
}

/// Finds a root of `f` on `[lo, hi]` by bisection.
///
/// `f(lo)` and `f(hi)` must not share a strict sign. When the bracket is
/// positive and spans more than a factor of four the split point is the
/// geometric mean, so brackets covering many decades (e.g. `[1e-150, 10]`)
/// converge in a few hundred steps instead of stalling on the upper decades.
///
/// Returns [`Error::NoConvergence`] when the bracket collapses to adjacent
/// floats or the iteration cap is hit without meeting the residual target.
pub fn bisect<F>(f: F, lo: f64, hi: f64, tol: Tolerance) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if !(f_lo.is_finite() && f_hi.is_finite()) {
        return Err(Error::domain(
            "bracket endpoints evaluate to non-finite values",
        ));
    }
    if f_lo.abs() <= tol.residual {
        return Ok(lo);
    }
    if f_hi.abs() <= tol.residual {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::domain(format!(
            "root not bracketed on [{lo}, {hi}]: f = {f_lo:e}, {f_hi:e}"
        )));
    }

    let mut best = if f_lo.abs() < f_hi.abs() {
        (lo, f_lo)
    } else {
        (hi, f_hi)
    };
    for _ in 0..tol.max_iterations {
        let mid = if lo > 0.0 && hi > 4.0 * lo {
            (lo * hi).sqrt()
        } else {
            lo + 0.5 * (hi - lo)
        };
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid.abs() < best.1.abs() {
            best = (mid, f_mid);
        }
        if f_mid.abs() <= tol.residual {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence {
        iterations: tol.max_iterations,
        residual: best.1.abs(),
    })
}
