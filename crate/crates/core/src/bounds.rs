//! Upper and lower bounds on the ergodic spectral efficiency.
//!
//! Both bounds share the form
//!
//! ```text
//! log2(e) ∫₀^∞ (1/z) Σ_{k≤m} (1 - e^{-z g_k}) / 2F1(m, -δ; 1-δ; -z) dz
//! ```
//!
//! with signal gains `g_k = u_k` for the upper bound and `g_k = exp(l_k)`
//! for the lower one. `e^{-z g_k}` and `1 / 2F1` are the Laplace transforms
//! of the deterministic signal surrogate and of the normalized interference.
//! The intensity of the base-station process cancels out, so nothing here
//! takes it as input.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::LOG2_E;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    hyp2f1_interference, integrate_semi_infinite, QuadratureResult, SirModel,
};
use crate::randmat::{eigen_moment_table, EigenMomentTable};

/// Default absolute tolerance, in bits/s/Hz.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Below this `z` the integrand is replaced by its limit `Σ g_k`.
const SMALL_Z: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsResult {
    pub upper: f64,
    pub lower: f64,
    pub upper_err: f64,
    pub lower_err: f64,
    pub model: SirModel,
}

/// Integrand of either bound at `z`, before the `log2(e)` prefactor.
pub fn bound_integrand(model: &SirModel, gains: &[f64], z: f64) -> Result<f64> {
    let gains = &gains[..model.m()];
    if z < SMALL_Z {
        return Ok(gains.iter().sum());
    }
    let numerator: f64 = gains.iter().map(|&g| -(-z * g).exp_m1()).sum();
    if numerator == 0.0 {
        return Ok(0.0);
    }
    Ok(numerator / (z * hyp2f1_interference(model, z)?))
}

fn integrate_bound(model: &SirModel, gains: &[f64], tol: f64) -> Result<QuadratureResult> {
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let integrand = |z: f64| match bound_integrand(model, gains, z) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let result = integrate_semi_infinite(integrand, tol / LOG2_E);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let scale = |r: QuadratureResult| QuadratureResult {
        value: LOG2_E * r.value,
        error_estimate: LOG2_E * r.error_estimate,
        evaluations: r.evaluations,
    };
    match result {
        Ok(r) => Ok(scale(r)),
        Err(Error::Quadrature {
            value,
            error_estimate,
            evaluations,
        }) => Err(Error::Quadrature {
            value: LOG2_E * value,
            error_estimate: LOG2_E * error_estimate,
            evaluations,
        }),
        Err(e) => Err(e),
    }
}

fn check_table(model: &SirModel, table: &EigenMomentTable) -> Result<()> {
    if table.n() != model.n() {
        return Err(Error::InvalidParameter(format!(
            "moment table is for N = {} but the model has N = {}",
            table.n(),
            model.n()
        )));
    }
    Ok(())
}

/// Upper bound, signal surrogate `u_k ≈ E[σ_k²]`.
pub fn se_upper(model: &SirModel, table: &EigenMomentTable, tol: f64) -> Result<QuadratureResult> {
    check_table(model, table)?;
    integrate_bound(model, table.u(), tol)
}

/// Lower bound, signal surrogate `exp(l_k) ≈ exp(E[ln σ_k²])`.
pub fn se_lower(model: &SirModel, table: &EigenMomentTable, tol: f64) -> Result<QuadratureResult> {
    check_table(model, table)?;
    integrate_bound(model, &table.exp_l(), tol)
}

fn table_cache() -> &'static Mutex<HashMap<usize, Arc<EigenMomentTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<EigenMomentTable>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Moment table for `n`, computed once per process.
pub fn cached_table(n: usize) -> Result<Arc<EigenMomentTable>> {
    if let Some(t) = table_cache().lock().expect("table cache poisoned").get(&n) {
        return Ok(Arc::clone(t));
    }
    let table = Arc::new(eigen_moment_table(n)?);
    table_cache()
        .lock()
        .expect("table cache poisoned")
        .entry(n)
        .or_insert_with(|| Arc::clone(&table));
    Ok(table)
}

pub fn bounds_for(n: usize, m: usize, alpha: f64) -> Result<BoundsResult> {
    bounds_for_with_tol(n, m, alpha, DEFAULT_TOL)
}

pub fn bounds_for_with_tol(n: usize, m: usize, alpha: f64, tol: f64) -> Result<BoundsResult> {
    let model = SirModel::new(n, m, alpha)?;
    bounds_for_model(&model, tol)
}

pub fn bounds_for_model(model: &SirModel, tol: f64) -> Result<BoundsResult> {
    let table = cached_table(model.n())?;
    let upper = se_upper(model, &table, tol)?;
    let lower = se_lower(model, &table, tol)?;
    Ok(BoundsResult {
        upper: upper.value,
        lower: lower.value,
        upper_err: upper.error_estimate,
        lower_err: lower.error_estimate,
        model: *model,
    })
}
