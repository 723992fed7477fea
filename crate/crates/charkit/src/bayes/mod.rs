//! Bayesian-fusion weight initialization.

mod cov;
mod init;

pub use cov::StructuredCov;
pub use init::{bayes_initialize, fuse, measure_noise_variance, FusionState, InitConfig};
