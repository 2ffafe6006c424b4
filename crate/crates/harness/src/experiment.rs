//! The Monte-Carlo experiment runner.
//!
//! Replicate r draws its sample from a seed derived statelessly from
//! (master_seed, r), so execution order and parallelism never change the
//! result. Estimators are applied to the same sample within a replicate;
//! the aggregate reports bias / SD / RMSE of the estimated false-null
//! counts n·pi1_hat, plus FDR and power relative to the oracle when an FDR
//! experiment is scored.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use dos_core::datagen::{
    gen_gaussian, gen_uniform_mixture, replicate_seed, GaussianScenario, LabeledSample,
    UniformMixtureScenario,
};
use dos_core::estimators::{
    dos_storey, jd_bootstrap, lsl, storey_at, storey_median, udos, DosParams,
    ProportionEstimate,
};
use dos_core::fdr::{adaptive_bh, confusion_metrics, fdr_power_summary, EvalMetrics};
use dos_core::PValueSample;

use crate::error::{HarnessError, Result};

/// A data-generating model for one experiment.
#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    Gaussian(GaussianScenario),
    UniformMixture(UniformMixtureScenario),
}

impl Scenario {
    pub fn n(&self) -> usize {
        match self {
            Scenario::Gaussian(s) => s.n,
            Scenario::UniformMixture(s) => s.n,
        }
    }

    pub fn n_false(&self) -> usize {
        match self {
            Scenario::Gaussian(s) => s.n_false(),
            Scenario::UniformMixture(s) => s.n_false(),
        }
    }

    pub fn generate(&self, seed: u64) -> LabeledSample {
        match self {
            Scenario::Gaussian(s) => gen_gaussian(s, seed),
            Scenario::UniformMixture(s) => gen_uniform_mixture(s, seed),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Scenario::Gaussian(s) => format!(
                "gaussian(n={}, pi1={}, mu1={}, mu0={}, rho={})",
                s.n, s.pi1, s.mu1, s.mu0, s.rho
            ),
            Scenario::UniformMixture(s) => {
                format!("uniform_mixture(n={}, pi1={}, b={})", s.n, s.pi1, s.b)
            }
        }
    }
}

/// One estimator column of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub enum EstimatorSpec {
    Dos { alpha: f64, c: f64 },
    Udos { alpha: f64, c: f64 },
    Storey { lambda: f64 },
    StMed,
    Lsl,
    Jd { grid: Vec<f64>, b: usize },
    Fixed { pi0: f64 },
}

impl EstimatorSpec {
    /// Column label, following the conventional names (DOS1, DOS05, ST-1/2,
    /// ST-MED, LSL, JD).
    pub fn label(&self) -> String {
        fn dos_suffix(alpha: f64) -> String {
            if alpha == 1.0 {
                "1".into()
            } else if alpha == 0.5 {
                "05".into()
            } else {
                format!("(a={alpha})")
            }
        }
        match self {
            EstimatorSpec::Dos { alpha, .. } => format!("DOS{}", dos_suffix(*alpha)),
            EstimatorSpec::Udos { alpha, .. } => format!("UDOS{}", dos_suffix(*alpha)),
            EstimatorSpec::Storey { lambda } if *lambda == 0.5 => "ST-1/2".into(),
            EstimatorSpec::Storey { lambda } => format!("ST-{lambda}"),
            EstimatorSpec::StMed => "ST-MED".into(),
            EstimatorSpec::Lsl => "LSL".into(),
            EstimatorSpec::Jd { .. } => "JD".into(),
            EstimatorSpec::Fixed { pi0 } => format!("FIXED-{pi0}"),
        }
    }

    /// Validate tuning parameters without running anything.
    pub fn validate(&self) -> Result<()> {
        match self {
            EstimatorSpec::Dos { alpha, c } | EstimatorSpec::Udos { alpha, c } => {
                DosParams::new(*alpha, *c)?;
            }
            EstimatorSpec::Storey { lambda } => {
                if !(*lambda > 0.0 && *lambda < 1.0) {
                    return Err(HarnessError::Config(format!(
                        "storey lambda must lie in (0, 1), got {lambda}"
                    )));
                }
            }
            EstimatorSpec::Jd { grid, b } => {
                if grid.is_empty() || grid.iter().any(|&l| !(l > 0.0 && l < 1.0)) {
                    return Err(HarnessError::Config(
                        "jd grid must be non-empty with values in (0, 1)".into(),
                    ));
                }
                if *b == 0 {
                    return Err(HarnessError::Config("jd b must be at least 1".into()));
                }
            }
            EstimatorSpec::Fixed { pi0 } => {
                if !(*pi0 > 0.0 && *pi0 <= 1.0) {
                    return Err(HarnessError::Config(format!(
                        "fixed pi0 must lie in (0, 1], got {pi0}"
                    )));
                }
            }
            EstimatorSpec::StMed | EstimatorSpec::Lsl => {}
        }
        Ok(())
    }

    /// Copy of the spec with the DOS exclusion fraction replaced; estimators
    /// without a c parameter are returned unchanged.
    pub fn with_c(&self, c: f64) -> EstimatorSpec {
        match self {
            EstimatorSpec::Dos { alpha, .. } => EstimatorSpec::Dos { alpha: *alpha, c },
            EstimatorSpec::Udos { alpha, .. } => EstimatorSpec::Udos { alpha: *alpha, c },
            other => other.clone(),
        }
    }

    /// Apply the estimator to one sample. `est_index` separates the
    /// bootstrap RNG streams of multiple JD estimators in one experiment.
    pub fn apply(
        &self,
        sample: &PValueSample,
        replicate_seed: u64,
        est_index: usize,
    ) -> Result<ProportionEstimate> {
        let est = match self {
            EstimatorSpec::Dos { alpha, c } => {
                dos_storey(sample, &DosParams::new(*alpha, *c)?)?.proportion()
            }
            EstimatorSpec::Udos { alpha, c } => {
                udos(sample, &DosParams::new(*alpha, *c)?)?
            }
            EstimatorSpec::Storey { lambda } => storey_at(sample, *lambda)?,
            EstimatorSpec::StMed => storey_median(sample)?,
            EstimatorSpec::Lsl => lsl(sample)?,
            EstimatorSpec::Jd { grid, b } => {
                let mut rng = ChaCha8Rng::seed_from_u64(replicate_seed);
                rng.set_stream(1 + est_index as u64);
                jd_bootstrap(sample, grid, *b, &mut rng)?
            }
            EstimatorSpec::Fixed { pi0 } => {
                ProportionEstimate::from_pi0_raw(*pi0, sample.n(), None, "fixed")
            }
        };
        Ok(est)
    }
}

/// Per-estimator aggregate over the replicates.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorStats {
    pub label: String,
    /// Mean of the estimated false-null counts n·pi1_hat.
    pub mean: f64,
    /// mean − n1.
    pub bias: f64,
    /// Sample standard deviation (divisor N−1).
    pub sd: f64,
    /// sqrt(mean((n·pi1_hat − n1)^2)).
    pub rmse: f64,
    /// Mean FDP, present for FDR experiments.
    pub fdr: Option<f64>,
    /// Mean power / oracle mean power, present for FDR experiments.
    pub relative_power: Option<f64>,
}

/// Results of one experiment, with enough header information to reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateStats {
    pub scenario: String,
    pub n: usize,
    pub n_false: usize,
    pub replicates: usize,
    pub master_seed: u64,
    /// FDR level, present for FDR experiments.
    pub level: Option<f64>,
    pub estimators: Vec<EstimatorStats>,
}

/// A validated, runnable experiment.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub scenario: Scenario,
    pub estimators: Vec<EstimatorSpec>,
    pub replicates: usize,
    pub master_seed: u64,
}

/// Label used for the oracle column of FDR experiments.
pub const ORACLE_LABEL: &str = "ORACLE";

impl Experiment {
    pub fn new(
        scenario: Scenario,
        estimators: Vec<EstimatorSpec>,
        replicates: usize,
        master_seed: u64,
    ) -> Result<Self> {
        if replicates == 0 {
            return Err(HarnessError::Config("replicates must be at least 1".into()));
        }
        if estimators.is_empty() {
            return Err(HarnessError::Config("estimator list is empty".into()));
        }
        for est in &estimators {
            est.validate()?;
        }
        Ok(Self {
            scenario,
            estimators,
            replicates,
            master_seed,
        })
    }

    fn aggregate(&self, counts_by_estimator: Vec<Vec<f64>>) -> Vec<EstimatorStats> {
        let n1 = self.scenario.n_false() as f64;
        self.estimators
            .iter()
            .zip(counts_by_estimator)
            .map(|(spec, counts)| {
                let (mean, bias, sd, rmse) = summarize_counts(&counts, n1);
                EstimatorStats {
                    label: spec.label(),
                    mean,
                    bias,
                    sd,
                    rmse,
                    fdr: None,
                    relative_power: None,
                }
            })
            .collect()
    }

    /// Run the proportion-estimation experiment: per replicate, generate one
    /// labeled sample and apply every estimator; aggregate the counts.
    pub fn run(&self) -> Result<AggregateStats> {
        let per_replicate: Vec<Vec<f64>> = (0..self.replicates as u64)
            .into_par_iter()
            .map(|r| {
                let seed = replicate_seed(self.master_seed, r);
                let rep = self.scenario.generate(seed);
                let n = self.scenario.n() as f64;
                self.estimators
                    .iter()
                    .enumerate()
                    .map(|(j, est)| Ok(n * est.apply(&rep.sample, seed, j)?.pi1))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;

        let counts = transpose(per_replicate, self.estimators.len());
        Ok(AggregateStats {
            scenario: self.scenario.describe(),
            n: self.scenario.n(),
            n_false: self.scenario.n_false(),
            replicates: self.replicates,
            master_seed: self.master_seed,
            level: None,
            estimators: self.aggregate(counts),
        })
    }

    /// Run the adaptive-BH experiment: per replicate, feed each estimator's
    /// pi0 into adaptive BH and score against the truth; an oracle column
    /// using the true pi0 is appended. Relative power is the ratio of mean
    /// powers against the oracle (0/0 -> 1).
    pub fn run_fdr(&self, level: f64) -> Result<AggregateStats> {
        if !(level > 0.0 && level < 1.0) {
            return Err(HarnessError::Config(format!(
                "level must lie in (0, 1), got {level}"
            )));
        }
        let n = self.scenario.n();
        let pi0_true = ((n - self.scenario.n_false()) as f64 / n as f64)
            .clamp(1.0 / n as f64, 1.0);

        struct RepOutcome {
            counts: Vec<f64>,
            metrics: Vec<EvalMetrics>,
            oracle: EvalMetrics,
        }

        let outcomes: Vec<RepOutcome> = (0..self.replicates as u64)
            .into_par_iter()
            .map(|r| {
                let seed = replicate_seed(self.master_seed, r);
                let rep = self.scenario.generate(seed);
                let mut counts = Vec::with_capacity(self.estimators.len());
                let mut metrics = Vec::with_capacity(self.estimators.len());
                for (j, est) in self.estimators.iter().enumerate() {
                    let prop = est.apply(&rep.sample, seed, j)?;
                    counts.push(n as f64 * prop.pi1);
                    let rejections = adaptive_bh(&rep.sample, level, prop.pi0)?;
                    metrics.push(confusion_metrics(&rejections, &rep.truth)?);
                }
                let oracle_rejections = adaptive_bh(&rep.sample, level, pi0_true)?;
                let oracle = confusion_metrics(&oracle_rejections, &rep.truth)?;
                Ok(RepOutcome {
                    counts,
                    metrics,
                    oracle,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let counts = transpose(
            outcomes.iter().map(|o| o.counts.clone()).collect(),
            self.estimators.len(),
        );
        let mut stats = self.aggregate(counts);

        let oracle_metrics: Vec<EvalMetrics> = outcomes.iter().map(|o| o.oracle).collect();
        let (oracle_fdr, oracle_power) = fdr_power_summary(&oracle_metrics)?;
        for (j, est_stats) in stats.iter_mut().enumerate() {
            let per_rep: Vec<EvalMetrics> =
                outcomes.iter().map(|o| o.metrics[j]).collect();
            let (fdr, power) = fdr_power_summary(&per_rep)?;
            est_stats.fdr = Some(fdr);
            est_stats.relative_power = Some(relative_power(power, oracle_power));
        }

        let n1 = self.scenario.n_false() as f64;
        stats.push(EstimatorStats {
            label: ORACLE_LABEL.into(),
            mean: n1,
            bias: 0.0,
            sd: 0.0,
            rmse: 0.0,
            fdr: Some(oracle_fdr),
            relative_power: Some(1.0),
        });

        Ok(AggregateStats {
            scenario: self.scenario.describe(),
            n,
            n_false: self.scenario.n_false(),
            replicates: self.replicates,
            master_seed: self.master_seed,
            level: Some(level),
            estimators: stats,
        })
    }

    /// Re-run the experiment once per c value, sharing the per-replicate
    /// samples (same seeds) so that differences isolate c.
    pub fn sweep_c(&self, c_values: &[f64]) -> Result<Vec<(f64, AggregateStats)>> {
        if c_values.is_empty() {
            return Err(HarnessError::Config("no c values supplied".into()));
        }
        for &c in c_values {
            if !(0.0..0.5).contains(&c) || c.is_nan() {
                return Err(HarnessError::Core(dos_core::Error::BadC(c)));
            }
        }
        c_values
            .iter()
            .map(|&c| {
                let run = Experiment {
                    scenario: self.scenario.clone(),
                    estimators: self
                        .estimators
                        .iter()
                        .map(|e| e.with_c(c))
                        .collect(),
                    replicates: self.replicates,
                    master_seed: self.master_seed,
                };
                Ok((c, run.run()?))
            })
            .collect()
    }
}

fn relative_power(power: f64, oracle_power: f64) -> f64 {
    if oracle_power == 0.0 {
        if power == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        power / oracle_power
    }
}

fn transpose(per_replicate: Vec<Vec<f64>>, columns: usize) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::with_capacity(per_replicate.len()); columns];
    for row in per_replicate {
        for (j, v) in row.into_iter().enumerate() {
            out[j].push(v);
        }
    }
    out
}

fn summarize_counts(counts: &[f64], n1: f64) -> (f64, f64, f64, f64) {
    let reps = counts.len() as f64;
    let mean = counts.iter().sum::<f64>() / reps;
    let bias = mean - n1;
    let sd = if counts.len() > 1 {
        (counts.iter().map(|c| (c - mean) * (c - mean)).sum::<f64>() / (reps - 1.0)).sqrt()
    } else {
        0.0
    };
    let rmse = (counts.iter().map(|c| (c - n1) * (c - n1)).sum::<f64>() / reps).sqrt();
    (mean, bias, sd, rmse)
}
