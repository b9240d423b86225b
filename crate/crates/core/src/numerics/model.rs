use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Link-level parameters shared by the analytic bounds and the simulator:
/// `n` antennas at each end, `m` spatial streams and pathloss exponent `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SirModel {
    n: usize,
    m: usize,
    alpha: f64,
    delta: f64,
}

impl SirModel {
    pub fn new(n: usize, m: usize, alpha: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "number of antennas N must be at least 1".into(),
            ));
        }
        if m == 0 || m > n {
            return Err(Error::InvalidParameter(format!(
                "number of streams must satisfy 1 <= m <= N (got m = {m}, N = {n})"
            )));
        }
        if !(alpha.is_finite() && alpha > 2.0) {
            return Err(Error::InvalidParameter(format!(
                "pathloss exponent must satisfy alpha > 2 (got {alpha})"
            )));
        }
        Ok(SirModel {
            n,
            m,
            alpha,
            delta: 2.0 / alpha,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Characteristic interference exponent 2/alpha, in (0, 1).
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Same antennas and pathloss, different stream count.
    pub fn with_streams(&self, m: usize) -> Result<Self> {
        SirModel::new(self.n, m, self.alpha)
    }
}
