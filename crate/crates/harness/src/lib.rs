//! Experiment harness for the DOS change-point proportion estimators:
//! TOML-configured Monte-Carlo experiments, adaptive-BH FDR experiments,
//! c-sensitivity sweeps, p-value file input, and CSV/markdown reports.

#![forbid(unsafe_code)]

pub mod config;
pub mod error;
pub mod experiment;
pub mod io;
pub mod report;

pub use config::{ExperimentConfig, OutputFormat};
pub use error::{HarnessError, Result};
pub use experiment::{AggregateStats, EstimatorSpec, EstimatorStats, Experiment, Scenario};
