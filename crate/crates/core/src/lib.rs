//! Change-point driven estimation of the proportion of false null
//! hypotheses in multiple testing.
//!
//! The crate provides:
//!
//! - [`estimators`]: the difference-of-slopes (DOS) change-point statistic,
//!   the DOS-Storey and uncorrected-DOS proportion estimators, and
//!   Storey-family baselines (fixed lambda, median rule, lowest slope,
//!   bootstrap-averaged).
//! - [`fdr`]: the Benjamini-Hochberg step-up procedure, its adaptive
//!   variant driven by a plug-in pi0 estimate, and FDP/power scoring.
//! - [`datagen`]: seeded generators for Gaussian two-group testing (with
//!   optional equicorrelation and composite superuniform nulls) and uniform
//!   mixtures.
//! - [`asymptotics`]: analytic p-value models with CDF/quantile evaluation
//!   and the numerical machinery for the limiting change-point location and
//!   estimable proportion.
//! - [`normal`]: high-precision standard normal CDF, survival, and quantile.

#![forbid(unsafe_code)]

pub mod asymptotics;
pub mod datagen;
pub mod error;
pub mod estimators;
pub mod fdr;
pub mod normal;
pub mod sample;

pub use error::{Error, Result};
pub use sample::{validate_sample, PValueSample};
