//! Data tables behind the eigenvalue-approximation figure and the two
//! spectral-efficiency sweeps, plus gap statistics and the optimal stream
//! count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{bounds_for_model, cached_table, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::numerics::SirModel;
use crate::simulator::{
    empirical_eigen_means, estimate_se, SimConfig, SimMode, DEFAULT_INTERFERERS, DEFAULT_LAMBDA,
    DEFAULT_SEED,
};

pub const FIG1_SIZES: [usize; 4] = [4, 8, 16, 32];
pub const FIG2_ALPHAS: [f64; 3] = [3.0, 4.0, 5.0];
pub const FIG2A_SIZES: [usize; 8] = [2, 4, 6, 8, 10, 12, 14, 16];
pub const FIG2B_ANTENNAS: usize = 8;
pub const DEFAULT_SWEEP_DROPS: usize = 20_000;
pub const DEFAULT_EIGEN_SAMPLES: usize = 10_000;

/// Simulation and quadrature settings shared by every grid point of a sweep.
/// Every point uses the same seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSettings {
    pub lambda: f64,
    pub interferer_count: usize,
    pub drops: usize,
    pub seed: u64,
    pub mode: SimMode,
    pub tol: f64,
    /// When false, rows carry bounds only.
    pub simulate: bool,
}

impl Default for SweepSettings {
    fn default() -> Self {
        SweepSettings {
            lambda: DEFAULT_LAMBDA,
            interferer_count: DEFAULT_INTERFERERS,
            drops: DEFAULT_SWEEP_DROPS,
            seed: DEFAULT_SEED,
            mode: SimMode::DirectGamma,
            tol: DEFAULT_TOL,
            simulate: true,
        }
    }
}

impl SweepSettings {
    fn sim_config(&self, model: SirModel) -> SimConfig {
        SimConfig {
            model,
            lambda: self.lambda,
            interferer_count: self.interferer_count,
            drops: self.drops,
            seed: self.seed,
            mode: self.mode,
            tail_compensation: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub n: usize,
    pub m: usize,
    pub upper: f64,
    pub lower: f64,
    pub sim_mean: Option<f64>,
    pub sim_ci95: Option<f64>,
}

impl SweepRow {
    /// Whether the simulated mean lies in
    /// `[lower - 3 ci - num_tol, upper + 3 ci + num_tol]`; `None` without a
    /// simulation.
    pub fn within_bounds(&self, num_tol: f64) -> Option<bool> {
        let mean = self.sim_mean?;
        let slack = 3.0 * self.sim_ci95.unwrap_or(0.0) + num_tol;
        Some(mean >= self.lower - slack && mean <= self.upper + slack)
    }

    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fig1Row {
    pub n: usize,
    /// 1-based eigenvalue index, largest first.
    pub i: usize,
    /// `u_i / n`.
    pub approx: f64,
    pub empirical: f64,
    pub ci95: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamOptimum {
    pub n: usize,
    pub alpha: f64,
    pub m_star: usize,
    pub se_at_m_star: f64,
    pub curve: Vec<(usize, f64)>,
}

impl StreamOptimum {
    /// Maximizer of `curve`, ties broken toward smaller `m`.
    pub fn from_curve(n: usize, alpha: f64, curve: Vec<(usize, f64)>) -> Result<Self> {
        let mut best: Option<(usize, f64)> = None;
        for &(m, se) in &curve {
            match best {
                Some((bm, bse)) if se < bse || (se == bse && m >= bm) => {}
                _ => best = Some((m, se)),
            }
        }
        let (m_star, se_at_m_star) = best.ok_or(Error::EmptyTable)?;
        Ok(StreamOptimum {
            n,
            alpha,
            m_star,
            se_at_m_star,
            curve,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig2b {
    pub rows: Vec<SweepRow>,
    /// One per pathloss exponent, from the simulated curve (or the upper
    /// bound when simulation is disabled).
    pub optima: Vec<StreamOptimum>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapStats {
    pub mean_gap: f64,
    pub max_gap: f64,
    pub min_gap: f64,
}

pub fn gap_stats(rows: &[SweepRow]) -> Result<GapStats> {
    if rows.is_empty() {
        return Err(Error::EmptyTable);
    }
    let mut gaps: Vec<f64> = rows.iter().map(SweepRow::gap).collect();
    // Sorted so the mean does not depend on row order.
    gaps.sort_by(f64::total_cmp);
    Ok(GapStats {
        mean_gap: gaps.iter().sum::<f64>() / gaps.len() as f64,
        max_gap: gaps[gaps.len() - 1],
        min_gap: gaps[0],
    })
}

pub fn run_fig1(n_set: &[usize], samples: usize, seed: u64) -> Result<Vec<Fig1Row>> {
    let per_n: Vec<Vec<Fig1Row>> = n_set
        .par_iter()
        .map(|&n| {
            let table = cached_table(n)?;
            let emp = empirical_eigen_means(n, samples, seed)?;
            Ok((0..n)
                .map(|k| Fig1Row {
                    n,
                    i: k + 1,
                    approx: table.u()[k] / n as f64,
                    empirical: emp.means[k],
                    ci95: emp.ci95[k],
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_n.into_iter().flatten().collect())
}

fn sweep_point(model: SirModel, settings: &SweepSettings) -> Result<SweepRow> {
    let bounds = bounds_for_model(&model, settings.tol)?;
    let (sim_mean, sim_ci95) = if settings.simulate {
        let est = estimate_se(&settings.sim_config(model))?;
        (Some(est.se_mean), est.ci95)
    } else {
        (None, None)
    };
    Ok(SweepRow {
        alpha: model.alpha(),
        n: model.n(),
        m: model.m(),
        upper: bounds.upper,
        lower: bounds.lower,
        sim_mean,
        sim_ci95,
    })
}

fn run_grid(models: Vec<SirModel>, settings: &SweepSettings) -> Result<Vec<SweepRow>> {
    models
        .into_par_iter()
        .map(|model| sweep_point(model, settings))
        .collect()
}

/// SE versus `N` with `m = N`, rows ordered by `alpha` then `n`.
pub fn run_fig2a(alpha_set: &[f64], n_set: &[usize], settings: &SweepSettings) -> Result<Vec<SweepRow>> {
    let models = alpha_set
        .iter()
        .flat_map(|&alpha| n_set.iter().map(move |&n| SirModel::new(n, n, alpha)))
        .collect::<Result<Vec<_>>>()?;
    run_grid(models, settings)
}

/// SE versus `m = 1..=n` at fixed `n`, rows ordered by `alpha` then `m`.
pub fn run_fig2b(n: usize, alpha_set: &[f64], settings: &SweepSettings) -> Result<Fig2b> {
    let models = alpha_set
        .iter()
        .flat_map(|&alpha| (1..=n).map(move |m| SirModel::new(n, m, alpha)))
        .collect::<Result<Vec<_>>>()?;
    let rows = run_grid(models, settings)?;

    let optima = alpha_set
        .iter()
        .map(|&alpha| {
            let curve = rows
                .iter()
                .filter(|r| r.alpha == alpha)
                .map(|r| (r.m, r.sim_mean.unwrap_or(r.upper)))
                .collect();
            StreamOptimum::from_curve(n, alpha, curve)
        })
        .collect::<Result<_>>()?;
    Ok(Fig2b { rows, optima })
}
