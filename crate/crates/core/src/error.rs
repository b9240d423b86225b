use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the domain of a function.
    #[error("{function}: argument {value} outside domain {domain}")]
    Domain {
        function: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// A model or configuration parameter violates its constraint.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Adaptive quadrature hit its subdivision limit. Carries the best estimate.
    #[error(
        "quadrature did not converge: value {value}, error estimate {error_estimate} \
         after {evaluations} evaluations"
    )]
    Quadrature {
        value: f64,
        error_estimate: f64,
        evaluations: usize,
    },

    #[error("root not bracketed: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("Jacobi eigensolver did not converge in {sweeps} sweeps (off-diagonal norm {off_norm})")]
    Eigen { sweeps: usize, off_norm: f64 },

    #[error("empty result table")]
    EmptyTable,

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(function: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            function,
            value,
            domain,
        }
    }

    /// True for failures of a numerical routine, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Quadrature { .. } | Error::Bracket { .. } | Error::Eigen { .. }
        )
    }
}
