pub mod bounds;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod numerics;
pub mod output;
pub mod randmat;
pub mod simulator;
pub mod stats;

pub use error::{Error, Result};
