//! Numerical core: adaptive quadrature, bracketing root finding and the
//! Gauss-hypergeometric interference kernel shared by both bounds.

mod hypergeometric;
mod model;
mod quadrature;
mod root;

pub use hypergeometric::hyp2f1_interference;
pub use model::SirModel;
pub use quadrature::{
    integrate_adaptive, integrate_adaptive_with, integrate_semi_infinite,
    integrate_semi_infinite_with, QuadratureOptions, QuadratureResult,
};
pub use root::{find_root, find_root_with, DEFAULT_MAX_ITERATIONS};
