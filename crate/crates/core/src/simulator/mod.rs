//! Monte-Carlo estimate of the ergodic spectral efficiency of a typical
//! user at the origin of a Poisson field of base stations.
//!
//! Each drop draws the serving channel, the ordered base-station distances
//! and the per-stream interference fading, then evaluates
//! `Σ_k log2(1 + SIR_k)` with
//!
//! ```text
//! SIR_k = r_1^{-α} σ_k² / Σ_{i≥2} r_i^{-α} q_{i,k}.
//! ```
//!
//! Noise is neglected. Drops are independent, each with its own random
//! substreams keyed by `(seed, drop index)`, and are reduced in fixed chunk
//! order, so estimates are bit-identical for any worker count.

mod linalg;
mod rng;

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use linalg::{hermitian_eigen, CMatrix, HermitianEigen};
pub use rng::{complex_gaussian, substream, Purpose};

use crate::error::{Error, Result};
use crate::numerics::SirModel;
use crate::stats::RunningMoments;

pub const DEFAULT_LAMBDA: f64 = 1.0;
pub const DEFAULT_INTERFERERS: usize = 500;
pub const DEFAULT_DROPS: usize = 10_000;
pub const DEFAULT_SEED: u64 = 42;

/// Drops per reduction chunk. Fixed so the summation order never depends on
/// scheduling.
const CHUNK: usize = 256;

/// How interference fading `q_{i,k}` is generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimMode {
    /// `q_{i,k}` drawn directly as a sum of `m` unit exponentials (Gamma(m, 1)).
    DirectGamma,
    /// `q_{i,k}` from explicit channels and SVD precoders/combiners.
    FullChannel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub model: SirModel,
    /// Base-station intensity (points per unit area).
    pub lambda: f64,
    /// Number of nearest interferers simulated explicitly.
    pub interferer_count: usize,
    pub drops: usize,
    pub seed: u64,
    pub mode: SimMode,
    /// Add the conditional mean of the interference beyond the last
    /// simulated interferer.
    pub tail_compensation: bool,
}

impl SimConfig {
    pub fn new(model: SirModel) -> Self {
        SimConfig {
            model,
            lambda: DEFAULT_LAMBDA,
            interferer_count: DEFAULT_INTERFERERS,
            drops: DEFAULT_DROPS,
            seed: DEFAULT_SEED,
            mode: SimMode::DirectGamma,
            tail_compensation: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "intensity lambda must be positive (got {})",
                self.lambda
            )));
        }
        if self.interferer_count == 0 {
            return Err(Error::InvalidParameter(
                "interferer count K must be at least 1".into(),
            ));
        }
        if self.drops == 0 {
            return Err(Error::InvalidParameter("drops must be at least 1".into()));
        }
        Ok(())
    }
}

/// Base-station distances seen from the typical user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkDrop {
    pub serving_distance: f64,
    /// Ascending, each beyond the serving distance.
    pub interferer_distances: Vec<f64>,
}

impl NetworkDrop {
    /// Mean interference, per unit fading power, from base stations beyond
    /// the last listed one: with `ρ = r²` those form a Poisson process of
    /// rate `λπ` on `(ρ_last, ∞)`, giving `λπ ρ_last^{1-α/2} / (α/2 - 1)`.
    pub fn residual_interference(&self, alpha: f64, lambda: f64) -> f64 {
        let last = self
            .interferer_distances
            .last()
            .copied()
            .unwrap_or(self.serving_distance);
        let half = 0.5 * alpha;
        lambda * PI * (last * last).powf(1.0 - half) / (half - 1.0)
    }
}

/// Ordered distances of the serving base station and `K` interferers.
///
/// Squared distances of a planar Poisson process seen from the origin are
/// the arrival times of a rate-`λπ` Poisson process, so
/// `r_k² = (E_1 + ... + E_k) / (λπ)` with unit exponentials `E_j`.
pub fn sample_drop<R: Rng + ?Sized>(config: &SimConfig, rng: &mut R) -> NetworkDrop {
    let scale = 1.0 / (config.lambda * PI);
    let mut arrival: f64 = rng.sample(Exp1);
    let serving_distance = (arrival * scale).sqrt();
    let interferer_distances = (0..config.interferer_count)
        .map(|_| {
            let e: f64 = rng.sample(Exp1);
            arrival += e;
            (arrival * scale).sqrt()
        })
        .collect();
    NetworkDrop {
        serving_distance,
        interferer_distances,
    }
}

/// Squared singular values of an `n x n` i.i.d. `CN(0, 1)` matrix, descending.
pub fn singular_values_sq<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Vec<f64>> {
    let h = CMatrix::gaussian(n, rng);
    let eig = hermitian_eigen(h.gram(), false)?;
    Ok(eig.values.into_iter().map(|v| v.max(0.0)).collect())
}

/// Serving-link state needed to evaluate one drop.
#[derive(Debug, Clone)]
pub struct ServingLink {
    /// `σ_k²`, descending.
    pub sigma_sq: Vec<f64>,
    /// Left singular vectors `U_1` (columns), only in full-channel mode.
    pub left_vectors: Option<CMatrix>,
}

pub fn serving_link<R: Rng + ?Sized>(n: usize, mode: SimMode, rng: &mut R) -> Result<ServingLink> {
    match mode {
        SimMode::DirectGamma => Ok(ServingLink {
            sigma_sq: singular_values_sq(n, rng)?,
            left_vectors: None,
        }),
        SimMode::FullChannel => {
            let h = CMatrix::gaussian(n, rng);
            let eig = hermitian_eigen(h.outer_gram(), true)?;
            Ok(ServingLink {
                sigma_sq: eig.values.into_iter().map(|v| v.max(0.0)).collect(),
                left_vectors: eig.vectors,
            })
        }
    }
}

/// Per-stream SIR of one drop. Interference fading is drawn from `rng`
/// interferer by interferer, so the first `K` interferers see the same
/// fading whatever `K` is.
pub fn stream_sirs<R: Rng + ?Sized>(
    config: &SimConfig,
    drop: &NetworkDrop,
    link: &ServingLink,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let model = &config.model;
    let (n, m, alpha) = (model.n(), model.m(), model.alpha());
    let mut interference = vec![0.0; m];

    match config.mode {
        SimMode::DirectGamma => {
            let fading = Gamma::new(m as f64, 1.0)
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            for &r in &drop.interferer_distances {
                let w = r.powf(-alpha);
                for slot in interference.iter_mut() {
                    *slot += w * fading.sample(rng);
                }
            }
        }
        SimMode::FullChannel => {
            let u1 = link.left_vectors.as_ref().ok_or_else(|| {
                Error::InvalidParameter("full-channel mode needs the serving left singular vectors".into())
            })?;
            for &r in &drop.interferer_distances {
                let w = r.powf(-alpha);
                let cross = CMatrix::gaussian(n, rng);
                // Precoder of interferer i: right singular vectors of its own served link.
                let own = CMatrix::gaussian(n, rng);
                let precoder = hermitian_eigen(own.gram(), true)?
                    .vectors
                    .expect("eigenvectors requested");
                for (k, slot) in interference.iter_mut().enumerate() {
                    let mut q = 0.0;
                    for j in 0..m {
                        // (U_1ᴴ H_{i,1} V_i)[k, j]
                        let mut acc = num_complex::Complex64::new(0.0, 0.0);
                        for row in 0..n {
                            let mut hv = num_complex::Complex64::new(0.0, 0.0);
                            for col in 0..n {
                                hv += cross[(row, col)] * precoder[(col, j)];
                            }
                            acc += u1[(row, k)].conj() * hv;
                        }
                        q += acc.norm_sqr();
                    }
                    *slot += w * q;
                }
            }
        }
    }

    if config.tail_compensation {
        // E[q_{i,k}] = m
        let tail = m as f64 * drop.residual_interference(alpha, config.lambda);
        interference.iter_mut().for_each(|v| *v += tail);
    }

    let signal_scale = drop.serving_distance.powf(-alpha);
    Ok(link.sigma_sq[..m]
        .iter()
        .zip(&interference)
        .map(|(&s, &i)| signal_scale * s / i)
        .collect())
}

/// Spectral efficiency `Σ_k log2(1 + SIR_k)` of one drop, in bits/s/Hz.
pub fn drop_se<R: Rng + ?Sized>(
    config: &SimConfig,
    drop: &NetworkDrop,
    link: &ServingLink,
    rng: &mut R,
) -> Result<f64> {
    Ok(stream_sirs(config, drop, link, rng)?
        .iter()
        .map(|s| s.ln_1p() * std::f64::consts::LOG2_E)
        .sum())
}

#[derive(Debug, Clone)]
struct DropOutcome {
    se: f64,
    sir_db: Vec<f64>,
}

fn simulate_drop(config: &SimConfig, index: u64) -> Result<DropOutcome> {
    let mut link_rng = substream(config.seed, index, Purpose::ServingChannel);
    let mut geometry_rng = substream(config.seed, index, Purpose::Geometry);
    let mut fading_rng = substream(config.seed, index, Purpose::Fading);

    let link = serving_link(config.model.n(), config.mode, &mut link_rng)?;
    let drop = sample_drop(config, &mut geometry_rng);
    let sirs = stream_sirs(config, &drop, &link, &mut fading_rng)?;
    Ok(DropOutcome {
        se: sirs.iter().map(|s| s.ln_1p()).sum::<f64>() * std::f64::consts::LOG2_E,
        sir_db: sirs.iter().map(|s| 10.0 * s.log10()).collect(),
    })
}

/// Per-drop spectral efficiencies in drop order.
pub fn se_samples(config: &SimConfig) -> Result<Vec<f64>> {
    config.validate()?;
    (0..config.drops as u64)
        .into_par_iter()
        .map(|i| simulate_drop(config, i).map(|o| o.se))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimEstimate {
    pub se_mean: f64,
    /// Half-width of the 95% interval; `None` when a single drop leaves the
    /// sample variance undefined.
    pub ci95: Option<f64>,
    pub per_stream_sir_db_mean: Vec<f64>,
    pub drops: usize,
    pub seed: u64,
}

impl SimEstimate {
    /// Interval half-width with an undefined interval treated as zero.
    pub fn ci95_or_zero(&self) -> f64 {
        self.ci95.unwrap_or(0.0)
    }
}

#[derive(Debug, Clone)]
struct ChunkSummary {
    se: RunningMoments,
    sir_db_sum: Vec<f64>,
}

pub fn estimate_se(config: &SimConfig) -> Result<SimEstimate> {
    config.validate()?;
    let m = config.model.m();
    let drops = config.drops;
    let chunks = drops.div_ceil(CHUNK);

    let summaries: Vec<ChunkSummary> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(drops);
            let mut summary = ChunkSummary {
                se: RunningMoments::default(),
                sir_db_sum: vec![0.0; m],
            };
            for i in start..end {
                let outcome = simulate_drop(config, i as u64)?;
                summary.se.push(outcome.se);
                for (acc, v) in summary.sir_db_sum.iter_mut().zip(&outcome.sir_db) {
                    *acc += v;
                }
            }
            Ok(summary)
        })
        .collect::<Result<_>>()?;

    let mut se = RunningMoments::default();
    let mut sir_db_sum = vec![0.0; m];
    for s in &summaries {
        se.merge(&s.se);
        for (acc, v) in sir_db_sum.iter_mut().zip(&s.sir_db_sum) {
            *acc += v;
        }
    }

    Ok(SimEstimate {
        se_mean: se.mean(),
        ci95: se.ci95(),
        per_stream_sir_db_mean: sir_db_sum.iter().map(|v| v / drops as f64).collect(),
        drops,
        seed: config.seed,
    })
}

/// Per-index sample means of ordered `σ_i²/N`, with 95% half-widths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenMeans {
    pub n: usize,
    pub means: Vec<f64>,
    pub ci95: Vec<Option<f64>>,
    pub samples: usize,
}

pub fn empirical_eigen_means(n: usize, samples: usize, seed: u64) -> Result<EigenMeans> {
    if n == 0 || samples == 0 {
        return Err(Error::InvalidParameter(
            "matrix size and sample count must be at least 1".into(),
        ));
    }
    let chunks = samples.div_ceil(CHUNK);
    let summaries: Vec<Vec<RunningMoments>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(samples);
            let mut acc = vec![RunningMoments::default(); n];
            for i in start..end {
                let mut rng = substream(seed, i as u64, Purpose::EigenSample);
                let values = singular_values_sq(n, &mut rng)?;
                for (a, v) in acc.iter_mut().zip(values) {
                    a.push(v / n as f64);
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;

    let mut total = vec![RunningMoments::default(); n];
    for chunk in &summaries {
        for (t, c) in total.iter_mut().zip(chunk) {
            t.merge(c);
        }
    }
    Ok(EigenMeans {
        n,
        means: total.iter().map(|t| t.mean()).collect(),
        ci95: total.iter().map(|t| t.ci95()).collect(),
        samples,
    })
}
