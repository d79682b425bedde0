//! Monte Carlo experiment driver, metrics, and complexity models.

mod complexity;
mod config;
mod experiment;
mod metrics;

pub use complexity::{complexity_flops, Method};
pub use config::{ExperimentConfig, MetricKind};
pub use experiment::{run_experiment, MetricRecord};
pub use metrics::{
    gauged_nmse, nmse, rmse_wrapped, rmse_wrapped_median, se_from_beams, spectral_efficiency,
    spectral_efficiency_from_matrices,
};
