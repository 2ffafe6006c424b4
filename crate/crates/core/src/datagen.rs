//! Seeded generators for the simulation models: Gaussian two-group testing
//! with optional equicorrelation, uniform mixtures, and superuniform
//! composite-null settings.
//!
//! Every generator is a pure function of (scenario, seed). Replicate seeds
//! are derived from the master seed by a stateless SplitMix64 step, so
//! replicates can run in any order or in parallel with identical results.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::fdr::TruthLabels;
use crate::normal::std_normal_sf;
use crate::sample::PValueSample;

/// Gaussian mean testing: test statistics T_i = mu + sqrt(rho)·U + sqrt(1−rho)·Z_i
/// with a single shared factor U per replicate, p_i = 1 − Φ(T_i).
///
/// `mu0 = 0` is the exact null; `mu0 < 0` produces superuniform null
/// p-values (composite null tested at the least favourable configuration).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianScenario {
    pub n: usize,
    pub pi1: f64,
    pub mu1: f64,
    pub mu0: f64,
    pub rho: f64,
}

impl GaussianScenario {
    pub fn new(n: usize, pi1: f64, mu1: f64, mu0: f64, rho: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadScenario("n must be positive".into()));
        }
        if !(0.0..=0.5).contains(&pi1) || pi1.is_nan() {
            return Err(Error::BadScenario(format!(
                "pi1 must lie in [0, 0.5], got {pi1}"
            )));
        }
        if mu1 <= 0.0 || mu1.is_nan() {
            return Err(Error::BadScenario(format!("mu1 must be > 0, got {mu1}")));
        }
        if mu0 > 0.0 || mu0.is_nan() {
            return Err(Error::BadScenario(format!("mu0 must be <= 0, got {mu0}")));
        }
        if !(0.0..1.0).contains(&rho) || rho.is_nan() {
            return Err(Error::BadScenario(format!(
                "rho must lie in [0, 1), got {rho}"
            )));
        }
        Ok(Self { n, pi1, mu1, mu0, rho })
    }

    /// Number of false nulls per replicate: ⌊n·pi1⌋, fixed.
    pub fn n_false(&self) -> usize {
        (self.n as f64 * self.pi1).floor() as usize
    }
}

/// Uniform two-component mixture `pi1·U[0,b] + pi0·U[0,1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformMixtureScenario {
    pub n: usize,
    pub pi1: f64,
    pub b: f64,
}

impl UniformMixtureScenario {
    pub fn new(n: usize, pi1: f64, b: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadScenario("n must be positive".into()));
        }
        if !(0.0..1.0).contains(&pi1) || pi1.is_nan() {
            return Err(Error::BadScenario(format!(
                "pi1 must lie in [0, 1), got {pi1}"
            )));
        }
        if b <= 0.0 || b >= 1.0 || b.is_nan() {
            return Err(Error::BadScenario(format!("b must lie in (0, 1), got {b}")));
        }
        Ok(Self { n, pi1, b })
    }

    pub fn n_false(&self) -> usize {
        (self.n as f64 * self.pi1).floor() as usize
    }
}

/// A generated sample with ground truth and the seed that produced it.
#[derive(Debug, Clone)]
pub struct LabeledSample {
    pub sample: PValueSample,
    pub truth: TruthLabels,
    pub seed: u64,
}

/// Stateless SplitMix64 stream: the seed of replicate `r` under master seed
/// `m` is the finalizer applied to m + (r+1)·phi.
pub fn replicate_seed(master_seed: u64, replicate: u64) -> u64 {
    let mut z = master_seed.wrapping_add(replicate.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn finish(mut pairs: Vec<(f64, bool)>, rng: &mut ChaCha8Rng, seed: u64) -> LabeledSample {
    // Shuffle after labeling so estimators cannot exploit position.
    pairs.shuffle(rng);
    let (values, labels): (Vec<f64>, Vec<bool>) = pairs.into_iter().unzip();
    let sample = PValueSample::new(values).expect("generated p-values lie in [0, 1]");
    LabeledSample {
        sample,
        truth: TruthLabels::new(labels),
        seed,
    }
}

/// Draw one replicate from the Gaussian scenario.
pub fn gen_gaussian(scenario: &GaussianScenario, seed: u64) -> LabeledSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shared: f64 = StandardNormal.sample(&mut rng);
    let w_shared = scenario.rho.sqrt();
    let w_own = (1.0 - scenario.rho).sqrt();
    let n1 = scenario.n_false();
    let pairs = (0..scenario.n)
        .map(|i| {
            let false_null = i < n1;
            let mu = if false_null { scenario.mu1 } else { scenario.mu0 };
            let z: f64 = StandardNormal.sample(&mut rng);
            let t = mu + w_shared * shared + w_own * z;
            (std_normal_sf(t), false_null)
        })
        .collect();
    finish(pairs, &mut rng, seed)
}

/// Draw one replicate from the uniform mixture scenario.
pub fn gen_uniform_mixture(scenario: &UniformMixtureScenario, seed: u64) -> LabeledSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n1 = scenario.n_false();
    let pairs = (0..scenario.n)
        .map(|i| {
            let false_null = i < n1;
            let u: f64 = rng.random();
            let p = if false_null { scenario.b * u } else { u };
            (p, false_null)
        })
        .collect();
    finish(pairs, &mut rng, seed)
}
