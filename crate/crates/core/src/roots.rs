//! Root finding for strictly increasing scalar functions.

use crate::error::{Error, Result};

/// Doubles `hi` (starting from `start`) until `f(hi) > target`.
pub fn expand_upper<F: Fn(f64) -> f64>(
    f: &F,
    target: f64,
    start: f64,
    max_doublings: u32,
) -> Result<f64> {
    let mut hi = start;
    for _ in 0..max_doublings {
        if f(hi) > target {
            return Ok(hi);
        }
        hi *= 2.0;
    }
    Err(Error::domain(format!(
        "no upper bracket for target {target} below {hi}"
    )))
}

/// Solves `f(x) = target` for increasing `f` with `f(lo) <= target < f(hi)`.
///
/// Stops once `|f(x) - target| <= tol` or the bracket collapses to adjacent floats.
pub fn bisect_increasing<F: Fn(f64) -> f64>(
    f: &F,
    target: f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> f64 {
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return mid;
        }
        let diff = f(mid) - target;
        if diff.abs() <= tol {
            return mid;
        }
        if diff < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Newton iteration safeguarded by a bracket; falls back to bisection whenever
/// the Newton step leaves `(lo, hi)` or fails to shrink the residual.
pub fn newton_bracketed<F, D>(f: &F, df: &D, target: f64, mut lo: f64, mut hi: f64, tol: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut x = 0.5 * (lo + hi);
    for _ in 0..400 {
        let diff = f(x) - target;
        if diff.abs() <= tol {
            return x;
        }
        if diff < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let slope = df(x);
        let newton = x - diff / slope;
        x = if slope > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
            return x;
        }
    }
    x
}
