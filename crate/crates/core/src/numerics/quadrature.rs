//! Globally adaptive Gauss-Kronrod (10/21 point) integration.
//!
//! The interval with the largest local error estimate is bisected until the
//! summed estimate meets the requested tolerance. Kronrod nodes never touch
//! the interval endpoints, so integrable endpoint singularities such as
//! `x^{-1/2}` or `ln(x) x^{-1/2}` are resolved by repeated bisection toward
//! the singular end.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            abs_tol: 1e-8,
            rel_tol: 0.0,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureOptions {
    pub fn absolute(tol: f64) -> Self {
        QuadratureOptions {
            abs_tol: tol,
            ..Default::default()
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const KRONROD_POINTS: usize = 21;

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    /// Error floor set by floating-point roundoff; bisecting cannot go below it.
    floor: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod21<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);

    let f_center = f(center);
    let mut res_k = f_center * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        // Odd Kronrod indices are the embedded Gauss nodes.
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();

    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    let floor = if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        50.0 * f64::EPSILON * res_abs
    } else {
        0.0
    };

    Segment {
        lo,
        hi,
        value,
        error: error.max(floor),
        floor,
    }
}

/// Integrates `f` over `[lo, hi]` to absolute tolerance `tol`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    integrate_adaptive_with(f, lo, hi, &QuadratureOptions::absolute(tol))
}

pub fn integrate_adaptive_with<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidParameter(format!(
            "integration limits must be finite with lo < hi (got [{lo}, {hi}])"
        )));
    }

    let first = kronrod21(&f, lo, hi);
    let mut evaluations = KRONROD_POINTS;
    let mut value = first.value;
    let mut error = first.error;
    let mut floor = first.floor;

    let mut heap = BinaryHeap::new();
    heap.push(first);
    // Error carried by segments too narrow to bisect further.
    let mut locked_error = 0.0;

    loop {
        let total_error = error + locked_error;
        if !value.is_finite() || !total_error.is_finite() {
            return Err(Error::Quadrature {
                value,
                error_estimate: total_error,
                evaluations,
            });
        }
        if heap.is_empty() || total_error <= opts.target(value) || error <= floor {
            return Ok(QuadratureResult {
                value,
                error_estimate: total_error,
                evaluations,
            });
        }
        if heap.len() >= opts.max_subdivisions {
            return Err(Error::Quadrature {
                value,
                error_estimate: total_error,
                evaluations,
            });
        }

        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            error -= worst.error;
            floor -= worst.floor;
            locked_error += worst.error;
            continue;
        }

        let left = kronrod21(&f, worst.lo, mid);
        let right = kronrod21(&f, mid, worst.hi);
        evaluations += 2 * KRONROD_POINTS;

        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        floor += left.floor + right.floor - worst.floor;

        heap.push(left);
        heap.push(right);

        // Running sums drift; resum occasionally.
        if heap.len() % 64 == 0 {
            error = heap.iter().map(|s| s.error).sum();
            floor = heap.iter().map(|s| s.floor).sum();
        }
    }
}

/// Integrates `f` over `[0, inf)` to absolute tolerance `tol`.
///
/// Uses the rational map `z = s / (1 - s)`, written in the reflected
/// variable `t = 1 - s` so that `z = (1 - t) / t` with `t` in `(0, 1]`. The
/// `z -> inf` end then sits at `t = 0`, where floating point keeps full
/// relative resolution. An integrand decaying like `z^{-1-eps}` becomes an
/// integrable `t^{eps-1}` singularity handled by endpoint bisection.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, tol: f64) -> Result<QuadratureResult> {
    integrate_semi_infinite_with(f, &QuadratureOptions::absolute(tol))
}

pub fn integrate_semi_infinite_with<F: Fn(f64) -> f64>(
    f: F,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult> {
    let mapped = |t: f64| {
        let inv = 1.0 / t;
        let z = inv - 1.0;
        let fz = f(z);
        if fz == 0.0 {
            0.0
        } else {
            fz * inv * inv
        }
    };
    integrate_adaptive_with(mapped, 0.0, 1.0, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_integrand_is_exact() {
        let r = integrate_adaptive(|_| 1.0, 0.0, 1.0, 1e-14).unwrap();
        assert!((r.value - 1.0).abs() <= 1e-14);
        assert_eq!(r.evaluations, KRONROD_POINTS);
    }

    #[test]
    fn inverse_sqrt_endpoint_singularity() {
        let r = integrate_adaptive(|x| x.powf(-0.5), 0.0, 1.0, 1e-10).unwrap();
        assert!((r.value - 2.0).abs() <= 1e-8, "{r:?}");
    }

    #[test]
    fn log_singularity() {
        // ∫₀¹ ln x dx = -1
        let r = integrate_adaptive(|x| x.ln(), 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value + 1.0).abs() <= 1e-11, "{r:?}");
    }

    #[test]
    fn reports_error_estimate_at_most_tolerance() {
        let r = integrate_adaptive(|x| (10.0 * x).sin(), 0.0, 3.0, 1e-10).unwrap();
        assert!(r.error_estimate <= 1e-10);
        let exact = (1.0 - (30.0f64).cos()) / 10.0;
        assert!((r.value - exact).abs() <= 1e-10);
    }

    #[test]
    fn nonconvergence_carries_best_estimate() {
        let opts = QuadratureOptions {
            abs_tol: 1e-15,
            rel_tol: 0.0,
            max_subdivisions: 3,
        };
        let err = integrate_adaptive_with(|x| x.powf(-0.9), 0.0, 1.0, &opts).unwrap_err();
        match err {
            Error::Quadrature {
                value,
                error_estimate,
                evaluations,
            } => {
                assert!(value > 1.0 && value.is_finite());
                assert!(error_estimate > 1e-15);
                assert!(evaluations > 0);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_limits() {
        assert!(integrate_adaptive(|x| x, 1.0, 0.0, 1e-8).is_err());
        assert!(integrate_adaptive(|x| x, 0.0, f64::INFINITY, 1e-8).is_err());
    }

    #[test]
    fn semi_infinite_examples() {
        let r = integrate_semi_infinite(|z| (-z).exp(), 1e-10).unwrap();
        assert!((r.value - 1.0).abs() <= 1e-10);
        let r = integrate_semi_infinite(|z| 1.0 / ((1.0 + z) * (1.0 + z)), 1e-10).unwrap();
        assert!((r.value - 1.0).abs() <= 1e-10);
        let r = integrate_semi_infinite(|z| z * (-z * z).exp(), 1e-10).unwrap();
        assert!((r.value - 0.5).abs() <= 1e-10);
    }

    #[test]
    fn semi_infinite_slow_power_tail() {
        // ∫₀^∞ (1+z)^{-1.4} dz = 1/0.4
        let r = integrate_semi_infinite(|z| (1.0 + z).powf(-1.4), 1e-9).unwrap();
        assert!((r.value - 2.5).abs() <= 1e-8, "{r:?}");
    }
}
