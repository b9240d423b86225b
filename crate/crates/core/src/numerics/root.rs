use crate::error::{Error, Result};

pub const DEFAULT_MAX_ITERATIONS: usize = 200;

/// Bisection on a bracketing interval `[lo, hi]`.
///
/// Stops once the bracket is narrower than `tol`, the midpoint is an exact
/// zero, or the bracket cannot shrink any further in floating point.
pub fn find_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    find_root_with(f, lo, hi, tol, DEFAULT_MAX_ITERATIONS)
}

pub fn find_root_with<F: Fn(f64) -> f64>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iterations: usize,
) -> Result<f64> {
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.is_nan() || f_hi.is_nan() || f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket { lo, hi, f_lo, f_hi });
    }

    let lo_negative = f_lo < 0.0;
    for _ in 0..max_iterations {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
