//! Per-index eigenvalue surrogates from an equal-probability partition of
//! the quarter circle law.
//!
//! The `k`-th largest normalized eigenvalue `σ_k²/N` is modelled as `X`
//! conditioned on the `k`-th region `(a_k, a_{k-1}]`, whose conditional
//! density is `N f_X` on that region. This gives
//!
//! ```text
//! u_k = N² ∫_{a_k}^{a_{k-1}} x f_X(x) dx          ≈ E[σ_k²]
//! l_k = N  ∫_{a_k}^{a_{k-1}} ln(x) f_X(x) dx + ln N  ≈ E[ln σ_k²]
//! ```
//!
//! `l_k` is integrated in the `x` domain; it equals the `y = ln x` form over
//! `(b_k, b_{k-1}]` by change of variables and keeps the domain finite.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::laws::{log_qc_quantile, qc_pdf_total, qc_quantile, LN_4};
use crate::error::{Error, Result};
use crate::numerics::{integrate_adaptive_with, QuadratureOptions};

/// Thresholds splitting the eigenvalue law into `n` regions of mass `1/n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenvaluePartition {
    n: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl EigenvaluePartition {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `a_0 = 4 > a_1 > ... > a_n = 0` in the `x = σ²/N` domain.
    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// `b_0 = ln 4 > ... > b_n = -inf` in the `y = ln x` domain.
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Region `k` (1-based) as `(a_k, a_{k-1}]`.
    pub fn region(&self, k: usize) -> (f64, f64) {
        (self.a[k], self.a[k - 1])
    }
}

pub fn make_partition(n: usize) -> Result<EigenvaluePartition> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "partition needs at least one region".into(),
        ));
    }
    let mut a = Vec::with_capacity(n + 1);
    let mut b = Vec::with_capacity(n + 1);
    a.push(4.0);
    b.push(LN_4);
    for k in 1..n {
        let p = 1.0 - k as f64 / n as f64;
        a.push(qc_quantile(p)?);
        b.push(log_qc_quantile(p)?);
    }
    a.push(0.0);
    b.push(f64::NEG_INFINITY);
    Ok(EigenvaluePartition { n, a, b })
}

/// Surrogates `u_k ≈ E[σ_k²]` and `l_k ≈ E[ln σ_k²]`, both in descending
/// order of `k = 1..=n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenMomentTable {
    n: usize,
    u: Vec<f64>,
    l: Vec<f64>,
    /// Summed quadrature error estimate over all entries.
    quadrature_error: f64,
}

impl EigenMomentTable {
    /// Wraps externally supplied surrogates, e.g. for sensitivity studies.
    /// Only shape and finiteness are checked.
    pub fn from_surrogates(u: Vec<f64>, l: Vec<f64>) -> Result<Self> {
        if u.is_empty() || u.len() != l.len() {
            return Err(Error::InvalidParameter(format!(
                "surrogate vectors must be non-empty and of equal length (got {} and {})",
                u.len(),
                l.len()
            )));
        }
        if u.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidParameter(
                "linear surrogates must be finite and non-negative".into(),
            ));
        }
        if l.iter().any(|v| v.is_nan() || *v == f64::INFINITY) {
            return Err(Error::InvalidParameter(
                "log surrogates must be below +inf".into(),
            ));
        }
        Ok(EigenMomentTable {
            n: u.len(),
            u,
            l,
            quadrature_error: 0.0,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn l(&self) -> &[f64] {
        &self.l
    }

    pub fn quadrature_error(&self) -> f64 {
        self.quadrature_error
    }

    /// Signal gains `exp(l_k)` fed to the lower bound.
    pub fn exp_l(&self) -> Vec<f64> {
        self.l.iter().map(|v| v.exp()).collect()
    }
}

const MOMENT_OPTIONS: QuadratureOptions = QuadratureOptions {
    abs_tol: 1e-15,
    rel_tol: 1e-12,
    max_subdivisions: 2000,
};

pub fn eigen_moment_table(n: usize) -> Result<EigenMomentTable> {
    let partition = make_partition(n)?;
    let nf = n as f64;
    let mut u = Vec::with_capacity(n);
    let mut l = Vec::with_capacity(n);
    let mut quadrature_error = 0.0;

    for k in 1..=n {
        let (lo, hi) = partition.region(k);
        let first = integrate_adaptive_with(|x| x * qc_pdf_total(x), lo, hi, &MOMENT_OPTIONS)?;
        let log = integrate_adaptive_with(
            |x| if x > 0.0 { x.ln() * qc_pdf_total(x) } else { 0.0 },
            lo,
            hi,
            &MOMENT_OPTIONS,
        )?;
        u.push(nf * nf * first.value);
        l.push(nf * log.value + nf.ln());
        quadrature_error += nf * nf * first.error_estimate + nf * log.error_estimate;
    }

    Ok(EigenMomentTable {
        n,
        u,
        l,
        quadrature_error,
    })
}

/// Closed-form `E[σ_k²]` surrogate (k is 1-based), used to cross-check the
/// quadrature route. Endpoint thresholds `a = 4` and `a = 0` use the
/// analytic limits of the arctangent terms.
pub fn eigen_mean_closed_form(partition: &EigenvaluePartition, k: usize) -> f64 {
    let nf = partition.n() as f64;
    let (a_k, a_prev) = partition.region(k);
    nf * nf / (4.0 * PI) * (upper_term(a_prev) + lower_term(a_k))
}

/// `a (a-2) sqrt(4/a - 1) + 4 atan((a-2) / (a sqrt(4/a - 1)))`
fn upper_term(a: f64) -> f64 {
    let r = (a * (4.0 - a)).max(0.0).sqrt(); // a sqrt(4/a - 1)
    if r == 0.0 {
        // a -> 4: atan(+inf); a -> 0: atan(-inf)
        return if a >= 2.0 { 2.0 * PI } else { -2.0 * PI };
    }
    (a - 2.0) * r + 4.0 * ((a - 2.0) / r).atan()
}

/// `-a (a-2) sqrt(4/a - 1) + 4 atan((a-2) sqrt(4/a - 1) / (a - 4))`
fn lower_term(a: f64) -> f64 {
    if a <= 0.0 {
        return 2.0 * PI;
    }
    if a >= 4.0 {
        return -2.0 * PI;
    }
    let s = (4.0 / a - 1.0).sqrt();
    -(a - 2.0) * (a * (4.0 - a)).sqrt() + 4.0 * ((a - 2.0) * s / (a - 4.0)).atan()
}
