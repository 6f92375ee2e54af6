//! Root finding for strictly increasing functions.

use crate::error::{Error, Result};

/// Find `x ∈ (lo, hi)` with `f(x) = 0` for increasing `f` given as
/// `(value, derivative)`, where `f(lo) < 0 < f(hi)`.
///
/// Bisection narrows the bracket to relative width `coarse`, then Newton
/// steps (falling back to bisection whenever a step leaves the bracket)
/// run until the step is below `tol·max(1, |x|)`.
pub fn increasing_root<F>(mut f: F, mut lo: f64, mut hi: f64, coarse: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let (f_lo, _) = f(lo)?;
    let (f_hi, _) = f(hi)?;
    if !(f_lo < 0.0 && f_hi > 0.0) {
        if f_lo == 0.0 {
            return Ok(lo);
        }
        if f_hi == 0.0 {
            return Ok(hi);
        }
        return Err(Error::RootBracketFailure { lo, hi, f_lo, f_hi });
    }
    let width = |lo: f64, hi: f64| (hi - lo) / lo.abs().max(hi.abs()).max(1.0);
    let mut guard = 0;
    while width(lo, hi) > coarse && guard < 200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (v, _) = f(mid)?;
        if v == 0.0 {
            return Ok(mid);
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        guard += 1;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..100 {
        let (v, d) = f(x)?;
        if v == 0.0 {
            return Ok(x);
        }
        if v < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let mut next = x - v / d;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        let step = (next - x).abs();
        x = next;
        if step <= tol * x.abs().max(1.0) || hi - lo <= tol * x.abs().max(1.0) {
            return Ok(x);
        }
    }
    Ok(x)
}
