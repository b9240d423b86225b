//! The interference kernel `2F1(m, -δ; 1-δ; -z)` with `δ = 2/α`.
//!
//! Its reciprocal is the Laplace transform of the normalized other-cell
//! interference when every interferer contributes Gamma(m, 1) fading. The
//! Euler integral representation needs `Re(b) > 0` and so diverges for
//! `b = -δ`; instead we sum the hypergeometric series under the integral
//! sign using `(-δ)_n / (1-δ)_n = -δ / (n - δ)`, which gives
//!
//! ```text
//! 2F1(m, -δ; 1-δ; -z) = 1 + δ ∫₀¹ u^{-δ-1} (1 - (1 + z u)^{-m}) du.
//! ```
//!
//! The integrand behaves like `m z u^{-δ}` near the origin and like
//! `u^{-δ-1}` once `z u >> 1`, so the range is split at `u = 1/z`:
//! the head is mapped by `u = c w^{1/(1-δ)}`, which absorbs the `u^{-δ}`
//! factor exactly, and the tail by `u = e^s`.

use super::model::SirModel;
use super::quadrature::{integrate_adaptive_with, QuadratureOptions};
use crate::error::{Error, Result};

const KERNEL_OPTIONS: QuadratureOptions = QuadratureOptions {
    abs_tol: 0.0,
    rel_tol: 1e-13,
    max_subdivisions: 500,
};

/// `1 - (1 + x)^{-m}` without cancellation for small `x`.
#[inline]
fn one_minus_power(x: f64, m: f64) -> f64 {
    -(-m * x.ln_1p()).exp_m1()
}

/// Evaluates `2F1(m, -2/α; 1 - 2/α; -z)` for the streams and pathloss of `model`.
pub fn hyp2f1_interference(model: &SirModel, z: f64) -> Result<f64> {
    if z.is_nan() || z < 0.0 {
        return Err(Error::domain("hyp2f1_interference", z, "z >= 0"));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if z.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let m = model.m() as f64;
    let delta = model.delta();

    // Head: ∫₀^c u^{-δ} h(u) du with h(u) = (1 - (1+zu)^{-m}) / u bounded by m z.
    let c = if z > 1.0 { 1.0 / z } else { 1.0 };
    let p = 1.0 / (1.0 - delta);
    let head_integrand = |w: f64| {
        let u = c * w.powf(p);
        if u == 0.0 {
            m * z
        } else {
            one_minus_power(z * u, m) / u
        }
    };
    let head = integrate_adaptive_with(head_integrand, 0.0, 1.0, &KERNEL_OPTIONS)?;
    let mut integral = c.powf(1.0 - delta) * p * head.value;

    if z > 1.0 {
        // Tail: ∫_{1/z}^1 u^{-δ-1} (1 - (1+zu)^{-m}) du with u = e^s.
        let tail_integrand = |s: f64| (-delta * s).exp() * one_minus_power(z * s.exp(), m);
        let tail = integrate_adaptive_with(tail_integrand, -z.ln(), 0.0, &KERNEL_OPTIONS)?;
        integral += tail.value;
    }

    Ok(1.0 + delta * integral)
}
