//! Evenly spaced time grids.

use crate::error::{Error, Result};

/// Largest number of points a grid may hold.
pub const MAX_POINTS: usize = 1_000_000;

/// `from, from + step, ...` up to and including `to` (within 1e-9 of a step).
///
/// Points are computed as `from + k step`, so no error accumulates.
pub fn time_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(from.is_finite() && to.is_finite() && step.is_finite()) {
        return Err(Error::domain("grid bounds and step must be finite"));
    }
    if step <= 0.0 {
        return Err(Error::domain(format!(
            "grid step must be positive, got {step}"
        )));
    }
    if to < from {
        return Err(Error::domain(format!(
            "grid end {to} precedes start {from}"
        )));
    }
    let span = (to - from) / step;
    if span >= MAX_POINTS as f64 {
        return Err(Error::domain(format!(
            "grid would exceed {MAX_POINTS} points"
        )));
    }
    let n = (span + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| from + k as f64 * step).collect())
}
