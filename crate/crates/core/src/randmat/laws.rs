//! Quarter circle law for `X = σ²/N` on `(0, 4]` and the induced law of
//! `Y = ln X` on `(-inf, ln 4]`.
//!
//! The arctangent forms of both CDFs are indeterminate at the support
//! endpoints, where the analytic limits are returned instead. Inside the
//! support the `F_X` argument `(x-2)/(x-4) * sqrt(4/x - 1)` is finite and
//! changes sign only at `x = 2`, so the principal branch of `atan` is
//! continuous and no branch correction is needed.

use std::f64::consts::{FRAC_1_PI, PI};

use crate::error::{Error, Result};
use crate::numerics::find_root;

pub const LN_4: f64 = 2.0 * std::f64::consts::LN_2;

/// Absolute bracket width at which quantile bisection stops.
pub const QUANTILE_TOL: f64 = 1e-12;

/// Density `f_X(x) = (1/π) sqrt(1/x - 1/4)` on `(0, 4]`.
pub fn qc_pdf(x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 4.0) {
        return Err(Error::domain("qc_pdf", x, "(0, 4]"));
    }
    Ok(qc_pdf_total(x))
}

/// As [`qc_pdf`] but zero outside the support.
pub fn qc_pdf_total(x: f64) -> f64 {
    if !(x > 0.0 && x <= 4.0) {
        return 0.0;
    }
    FRAC_1_PI * (1.0 / x - 0.25).max(0.0).sqrt()
}

pub(crate) fn cdf_in_support(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 4.0 {
        return 1.0;
    }
    let s = (4.0 / x - 1.0).sqrt();
    let v = (PI + x * s - 2.0 * ((x - 2.0) / (x - 4.0) * s).atan()) / (2.0 * PI);
    v.clamp(0.0, 1.0)
}

/// Distribution function `F_X` on `[0, 4]`.
pub fn qc_cdf(x: f64) -> Result<f64> {
    if !(0.0..=4.0).contains(&x) {
        return Err(Error::domain("qc_cdf", x, "[0, 4]"));
    }
    Ok(cdf_in_support(x))
}

/// Density of `Y = ln X`, `g_Y(y) = e^y f_X(e^y)`.
pub fn log_qc_pdf(y: f64) -> Result<f64> {
    if y.is_nan() || y > LN_4 {
        return Err(Error::domain("log_qc_pdf", y, "(-inf, ln 4]"));
    }
    let x = y.exp();
    // e^y sqrt(e^{-y} - 1/4) rewritten so that e^{-y} never overflows.
    Ok(FRAC_1_PI * (x * (1.0 - 0.25 * x)).max(0.0).sqrt())
}

pub(crate) fn log_cdf_in_support(y: f64) -> f64 {
    if y >= LN_4 {
        return 1.0;
    }
    let x = y.exp();
    if x == 0.0 {
        return 0.0;
    }
    // e^y sqrt(4e^{-y} - 1) = sqrt(x(4-x)); the atan argument
    // e^{-y}(e^y - 2) / sqrt(4e^{-y} - 1) = (x - 2) / sqrt(x(4-x)).
    let r = (x * (4.0 - x)).max(0.0).sqrt();
    if r == 0.0 {
        return 1.0;
    }
    let v = (PI + r + 2.0 * ((x - 2.0) / r).atan()) / (2.0 * PI);
    v.clamp(0.0, 1.0)
}

/// Distribution function `G_Y` on `[-inf, ln 4]`.
pub fn log_qc_cdf(y: f64) -> Result<f64> {
    if y.is_nan() || y > LN_4 {
        return Err(Error::domain("log_qc_cdf", y, "[-inf, ln 4]"));
    }
    Ok(log_cdf_in_support(y))
}

/// `F_X^{-1}(p)` by bisection on `[0, 4]`.
pub fn qc_quantile(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain("qc_quantile", p, "[0, 1]"));
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    if p == 1.0 {
        return Ok(4.0);
    }
    find_root(|x| cdf_in_support(x) - p, 0.0, 4.0, QUANTILE_TOL)
}

/// `G_Y^{-1}(p)`; `p = 0` maps to `f64::NEG_INFINITY`.
pub fn log_qc_quantile(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain("log_qc_quantile", p, "[0, 1]"));
    }
    if p == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if p == 1.0 {
        return Ok(LN_4);
    }
    let mut lo = -1.0;
    while log_cdf_in_support(lo) >= p {
        lo *= 2.0;
        if lo < -1e4 {
            return Err(Error::domain("log_qc_quantile", p, "p above smallest representable mass"));
        }
    }
    find_root(|y| log_cdf_in_support(y) - p, lo, LN_4, QUANTILE_TOL)
}
