//! Bracketing and bisection for monotone scalar equations on `(0, inf)`.

use crate::error::{Error, Result};

const MAX_EXPANSIONS: usize = 600;
const MAX_BISECTIONS: usize = 2000;

/// Widen `[lo, hi]` geometrically by `factor` until a function that is
/// decreasing on `(0, inf)` is positive at `lo` and negative at `hi`.
pub(crate) fn bracket_decreasing<F>(
    f: &F,
    mut lo: f64,
    mut hi: f64,
    factor: f64,
    what: &'static str,
) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    debug_assert!(lo > 0.0 && hi >= lo && factor > 1.0);
    let mut n = 0;
    while f(lo) <= 0.0 {
        lo /= factor;
        n += 1;
        if n > MAX_EXPANSIONS || lo < 1e-305 {
            return Err(Error::BracketFailure(what));
        }
    }
    n = 0;
    while f(hi) >= 0.0 {
        hi *= factor;
        n += 1;
        if n > MAX_EXPANSIONS || !hi.is_finite() {
            return Err(Error::BracketFailure(what));
        }
    }
    Ok((lo, hi))
}

/// Bisection for a decreasing function with `f(lo) > 0 > f(hi)`, both
/// endpoints positive. Midpoints are taken in log space while the bracket
/// spans more than a factor of two so that roots near zero converge in a
/// bounded number of steps.
pub(crate) fn bisect_decreasing<F>(f: &F, mut lo: f64, mut hi: f64, rel_tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= rel_tol * hi {
            break;
        }
        let mid = if hi > 2.0 * lo { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        } else if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Root of a decreasing function on `(0, inf)`, bracketed from `[lo, hi]`.
pub(crate) fn solve_decreasing<F>(
    f: F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    what: &'static str,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (lo, hi) = bracket_decreasing(&f, lo, hi, 4.0, what)?;
    Ok(bisect_decreasing(&f, lo, hi, rel_tol))
}
