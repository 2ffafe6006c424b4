//! TOML experiment configuration.
//!
//! Unknown keys are rejected (fail-fast). Schema:
//!
//! ```toml
//! replicates = 1000
//! master_seed = 42
//! output = "markdown"          # optional: "markdown" (default) or "csv"
//!
//! [scenario]
//! kind = "gaussian"            # or "uniform_mixture"
//! n = 1000
//! pi1 = 0.01
//! mu1 = 3.5                    # gaussian only
//! mu0 = 0.0                    # optional, default 0 (negative: superuniform nulls)
//! rho = 0.0                    # optional, default 0 (equicorrelation)
//! # b = 0.1                    # uniform_mixture only
//!
//! [[estimators]]
//! kind = "dos"                 # dos | udos | storey | st_med | lsl | jd | fixed
//! alpha = 1.0                  # dos/udos, optional (default 1.0)
//! c = 0.0                      # dos/udos, optional (default 0.0)
//! # lambda = 0.5               # storey
//! # grid = [0.05, ...]         # jd, optional
//! # b = 100                    # jd, optional
//! # pi0 = 1.0                  # fixed
//! ```

use std::path::Path;

use serde::Deserialize;

use dos_core::datagen::{GaussianScenario, UniformMixtureScenario};
use dos_core::estimators::{jd_default_grid, JD_DEFAULT_B};

use crate::error::{HarnessError, Result};
use crate::experiment::{EstimatorSpec, Experiment, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Markdown,
    Csv,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: ScenarioConfig,
    pub replicates: usize,
    pub master_seed: u64,
    #[serde(default)]
    pub output: OutputFormat,
    pub estimators: Vec<EstimatorConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScenarioConfig {
    Gaussian {
        n: usize,
        pi1: f64,
        mu1: f64,
        #[serde(default)]
        mu0: f64,
        #[serde(default)]
        rho: f64,
    },
    UniformMixture {
        n: usize,
        pi1: f64,
        b: f64,
    },
}

fn default_alpha() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EstimatorConfig {
    Dos {
        #[serde(default = "default_alpha")]
        alpha: f64,
        #[serde(default)]
        c: f64,
    },
    Udos {
        #[serde(default = "default_alpha")]
        alpha: f64,
        #[serde(default)]
        c: f64,
    },
    Storey {
        lambda: f64,
    },
    StMed,
    Lsl,
    Jd {
        grid: Option<Vec<f64>>,
        b: Option<usize>,
    },
    Fixed {
        pi0: f64,
    },
}

impl ScenarioConfig {
    pub fn build(&self) -> Result<Scenario> {
        Ok(match *self {
            ScenarioConfig::Gaussian {
                n,
                pi1,
                mu1,
                mu0,
                rho,
            } => Scenario::Gaussian(GaussianScenario::new(n, pi1, mu1, mu0, rho)?),
            ScenarioConfig::UniformMixture { n, pi1, b } => {
                Scenario::UniformMixture(UniformMixtureScenario::new(n, pi1, b)?)
            }
        })
    }
}

impl EstimatorConfig {
    pub fn build(&self) -> EstimatorSpec {
        match self {
            EstimatorConfig::Dos { alpha, c } => EstimatorSpec::Dos {
                alpha: *alpha,
                c: *c,
            },
            EstimatorConfig::Udos { alpha, c } => EstimatorSpec::Udos {
                alpha: *alpha,
                c: *c,
            },
            EstimatorConfig::Storey { lambda } => EstimatorSpec::Storey { lambda: *lambda },
            EstimatorConfig::StMed => EstimatorSpec::StMed,
            EstimatorConfig::Lsl => EstimatorSpec::Lsl,
            EstimatorConfig::Jd { grid, b } => EstimatorSpec::Jd {
                grid: grid.clone().unwrap_or_else(jd_default_grid),
                b: b.unwrap_or(JD_DEFAULT_B),
            },
            EstimatorConfig::Fixed { pi0 } => EstimatorSpec::Fixed { pi0: *pi0 },
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_toml(&text)
    }

    /// Validate everything and produce a runnable experiment. `seed` and
    /// `reps` override the config when given.
    pub fn into_experiment(
        &self,
        seed_override: Option<u64>,
        reps_override: Option<usize>,
    ) -> Result<Experiment> {
        Experiment::new(
            self.scenario.build()?,
            self.estimators.iter().map(EstimatorConfig::build).collect(),
            reps_override.unwrap_or(self.replicates),
            seed_override.unwrap_or(self.master_seed),
        )
    }
}
