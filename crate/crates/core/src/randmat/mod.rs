//! Asymptotic eigenvalue laws of `H Hᴴ / N` for an `N x N` matrix with
//! i.i.d. unit-variance entries, and the per-index eigenvalue surrogates
//! built by slicing those laws into `N` equal-probability regions.

mod laws;
mod moments;

pub use laws::{
    log_qc_cdf, log_qc_pdf, log_qc_quantile, qc_cdf, qc_pdf, qc_pdf_total, qc_quantile, LN_4,
    QUANTILE_TOL,
};
pub use moments::{
    eigen_mean_closed_form, eigen_moment_table, make_partition, EigenMomentTable,
    EigenvaluePartition,
};
