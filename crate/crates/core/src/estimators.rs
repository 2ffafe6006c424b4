//! Proportion estimators on a sorted p-value sample.
//!
//! The DOS family approximates the p-value plot by a piecewise linear
//! function with a single change in slope. The DOS sequence
//! `d_alpha(i) = (p_(2i) - 2 p_(i)) / i^alpha` compares the slope over
//! `[i, 2i]` with the slope over `[0, i]`; its argmax `k_hat` locates the
//! change-point, `lambda = p_(k_hat)` is the separation threshold, and
//! Storey's estimator evaluated at that threshold yields the proportion of
//! false null hypotheses. When true nulls are superuniform the uncorrected
//! ratio `k_hat / n` is used instead (uDOS).
//!
//! Storey-family baselines (fixed lambda, median rule, lowest slope,
//! bootstrap-averaged) are provided for comparison.

use rand::Rng;

use crate::error::{Error, Result};
use crate::sample::PValueSample;

/// Minimum sample size for the DOS operations: two usable indices i with 2i ≤ n.
pub const DOS_MIN_N: usize = 4;

/// Tuning of the DOS statistic: the exponent `alpha` and the fraction `c`
/// of leading DOS indices excluded from the argmax search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DosParams {
    alpha: f64,
    c: f64,
}

impl DosParams {
    pub fn new(alpha: f64, c: f64) -> Result<Self> {
        if !(0.5..=1.0).contains(&alpha) || alpha.is_nan() {
            return Err(Error::BadAlpha(alpha));
        }
        if !(0.0..0.5).contains(&c) || c.is_nan() {
            return Err(Error::BadC(c));
        }
        Ok(Self { alpha, c })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

impl Default for DosParams {
    /// alpha = 1, c = 0. Excluding no leading values is the practical
    /// default; c stays configurable for sensitivity sweeps.
    fn default() -> Self {
        Self { alpha: 1.0, c: 0.0 }
    }
}

/// Full output of the DOS-Storey estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct DosEstimate {
    /// Change-point index, 1-based; always ≤ n/2.
    pub k_hat: usize,
    /// Separation threshold p_(k_hat).
    pub lambda: f64,
    /// Unclamped estimate (k/n − lambda) / (1 − lambda).
    pub pi1_raw: f64,
    /// pi1_raw clamped to [0, 1].
    pub pi1: f64,
    /// The DOS sequence d_alpha(i), i = 1..⌊n/2⌋.
    pub dos_sequence: Vec<f64>,
    n: usize,
}

impl DosEstimate {
    pub fn n(&self) -> usize {
        self.n
    }

    /// View as a generic proportion estimate; pi0 is floored at 1/n so that
    /// adaptive BH can always divide by it.
    pub fn proportion(&self) -> ProportionEstimate {
        ProportionEstimate::from_pi0_raw(1.0 - self.pi1_raw, self.n, Some(self.lambda), "dos")
    }
}

/// A clamped (pi1, pi0) pair with the threshold and method that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ProportionEstimate {
    pub pi1: f64,
    pub pi0: f64,
    pub lambda_used: Option<f64>,
    pub method_tag: String,
}

impl ProportionEstimate {
    /// Clamp a raw pi0 into [1/n, 1] and derive pi1 = 1 − pi0.
    pub fn from_pi0_raw(pi0_raw: f64, n: usize, lambda_used: Option<f64>, tag: &str) -> Self {
        let floor = 1.0 / n as f64;
        let pi0 = pi0_raw.clamp(floor, 1.0);
        Self {
            pi1: 1.0 - pi0,
            pi0,
            lambda_used,
            method_tag: tag.to_owned(),
        }
    }
}

/// The DOS sequence d_alpha(i) = (p_(2i) − 2 p_(i)) / i^alpha for i = 1..⌊n/2⌋.
pub fn dos_sequence(sample: &PValueSample, alpha: f64) -> Result<Vec<f64>> {
    if !(0.5..=1.0).contains(&alpha) || alpha.is_nan() {
        return Err(Error::BadAlpha(alpha));
    }
    let n = sample.n();
    if n < DOS_MIN_N {
        return Err(Error::TooSmall { n, min: DOS_MIN_N });
    }
    let p = sample.values();
    Ok((1..=n / 2)
        .map(|i| (p[2 * i - 1] - 2.0 * p[i - 1]) / (i as f64).powf(alpha))
        .collect())
}

/// First admissible argmax index: ceil(max(1, n·c)), guarded against the
/// binary roundoff of decimal c (e.g. 100 · 0.02 = 2.0000000000000004).
fn search_lower_index(n: usize, c: f64) -> usize {
    let raw = n as f64 * c;
    (raw - 1e-9 * raw.max(1.0)).max(1.0).ceil() as usize
}

/// Argmax of `seq[lo-1..]` (1-based indices), smallest index on ties.
fn argmax_from(seq: &[f64], lo: usize) -> usize {
    let mut k = lo;
    let mut best = seq[lo - 1];
    for (i, &v) in seq.iter().enumerate().skip(lo) {
        if v > best {
            best = v;
            k = i + 1;
        }
    }
    k
}

/// The DOS change-point: argmax of the DOS sequence over
/// i ∈ [ceil(max(1, n·c)), ⌊n/2⌋], plus the threshold p_(k_hat).
pub fn dos_changepoint(sample: &PValueSample, params: &DosParams) -> Result<(usize, f64)> {
    let seq = dos_sequence(sample, params.alpha)?;
    let k = changepoint_from_sequence(&seq, sample.n(), params.c)?;
    Ok((k, sample.at_rank(k)))
}

fn changepoint_from_sequence(seq: &[f64], n: usize, c: f64) -> Result<usize> {
    let lo = search_lower_index(n, c);
    let hi = seq.len();
    if lo > hi {
        return Err(Error::EmptySearchRange { lo, hi });
    }
    Ok(argmax_from(seq, lo))
}

/// The DOS-Storey estimator: Storey's estimator evaluated at the DOS
/// threshold, pi1 = (k/n − p_(k)) / (1 − p_(k)), clamped to [0, 1].
pub fn dos_storey(sample: &PValueSample, params: &DosParams) -> Result<DosEstimate> {
    let seq = dos_sequence(sample, params.alpha)?;
    let n = sample.n();
    let k_hat = changepoint_from_sequence(&seq, n, params.c)?;
    let lambda = sample.at_rank(k_hat);
    if lambda >= 1.0 {
        return Err(Error::DegenerateLambda);
    }
    let pi1_raw = (k_hat as f64 / n as f64 - lambda) / (1.0 - lambda);
    Ok(DosEstimate {
        k_hat,
        lambda,
        pi1_raw,
        pi1: pi1_raw.clamp(0.0, 1.0),
        dos_sequence: seq,
        n,
    })
}

/// The uncorrected DOS estimator pi1 = k_hat / n, for superuniform true nulls.
pub fn udos(sample: &PValueSample, params: &DosParams) -> Result<ProportionEstimate> {
    let (k_hat, lambda) = dos_changepoint(sample, params)?;
    let pi1 = k_hat as f64 / sample.n() as f64;
    Ok(ProportionEstimate::from_pi0_raw(
        1.0 - pi1,
        sample.n(),
        Some(lambda),
        "udos",
    ))
}

/// Storey's plug-in estimator at a fixed lambda:
/// pi0 = (1 − F̂_n(lambda)) / (1 − lambda), clamped to [1/n, 1].
pub fn storey_at(sample: &PValueSample, lambda: f64) -> Result<ProportionEstimate> {
    if !(lambda > 0.0 && lambda < 1.0) || lambda.is_nan() {
        return Err(Error::BadLambda(lambda));
    }
    let n = sample.n();
    let ecdf = sample.count_at_most(lambda) as f64 / n as f64;
    let pi0_raw = (1.0 - ecdf) / (1.0 - lambda);
    Ok(ProportionEstimate::from_pi0_raw(
        pi0_raw,
        n,
        Some(lambda),
        "storey",
    ))
}

/// The median rule: Storey's estimator at lambda = p_(⌊n/2⌋).
pub fn storey_median(sample: &PValueSample) -> Result<ProportionEstimate> {
    let n = sample.n();
    if n < 2 {
        return Err(Error::TooSmall { n, min: 2 });
    }
    let lambda = sample.at_rank(n / 2);
    let mut est = storey_at(sample, lambda)?;
    est.method_tag = "st-med".to_owned();
    Ok(est)
}

/// Lowest-slope estimator. Slopes S_i = (1 − p_(i)) / (n + 1 − i) are scanned
/// for the first decrease; n0 = min(n, ⌊1/S_i⌋ + 1) at that point. Flat or
/// increasing slope sequences give pi0 = 1.
pub fn lsl(sample: &PValueSample) -> Result<ProportionEstimate> {
    let n = sample.n();
    if n < 2 {
        return Err(Error::TooSmall { n, min: 2 });
    }
    let p = sample.values();
    let mut prev = (1.0 - p[0]) / n as f64;
    for i in 2..=n {
        let s = (1.0 - p[i - 1]) / (n + 1 - i) as f64;
        if s < prev {
            let n0 = ((1.0 / s).floor() + 1.0).min(n as f64);
            return Ok(ProportionEstimate::from_pi0_raw(
                n0 / n as f64,
                n,
                None,
                "lsl",
            ));
        }
        prev = s;
    }
    Ok(ProportionEstimate::from_pi0_raw(1.0, n, None, "lsl"))
}

/// Default lambda grid for the bootstrap-averaged estimator: 0.05, 0.10, …, 0.90.
pub fn jd_default_grid() -> Vec<f64> {
    (1..=18).map(|i| i as f64 * 0.05).collect()
}

/// Default bootstrap replicate count for [`jd_bootstrap`].
pub const JD_DEFAULT_B: usize = 100;

/// Bootstrap-averaged Storey estimator. For every lambda in the grid the
/// bootstrap MSE of Storey's estimator is computed over `b` resamples
/// against the plug-in target min over the grid of pi0(lambda) (the least
/// conservative original-sample estimate); the original-sample estimates
/// whose MSE is at most the grid median are then averaged.
pub fn jd_bootstrap(
    sample: &PValueSample,
    lambda_grid: &[f64],
    b: usize,
    rng: &mut impl Rng,
) -> Result<ProportionEstimate> {
    if lambda_grid.is_empty() {
        return Err(Error::BadGrid("empty grid"));
    }
    if lambda_grid.iter().any(|&l| !(l > 0.0 && l < 1.0)) {
        return Err(Error::BadGrid("lambda outside (0, 1)"));
    }
    if b == 0 {
        return Err(Error::BadB);
    }
    let n = sample.n();
    let nf = n as f64;

    let pi0_at = |count: usize, lambda: f64| (1.0 - count as f64 / nf) / (1.0 - lambda);

    // Plug-in estimates on the original sample; the bootstrap MSE target is
    // their minimum over the grid.
    let base: Vec<f64> = lambda_grid
        .iter()
        .map(|&l| pi0_at(sample.count_at_most(l), l))
        .collect();
    let target = base.iter().copied().fold(f64::INFINITY, f64::min);

    // Bucket each sorted value by the number of grid lambdas strictly below
    // it, so one histogram per resample yields every count #{p* ≤ lambda}.
    let mut grid_order: Vec<usize> = (0..lambda_grid.len()).collect();
    grid_order.sort_by(|&a, &b| lambda_grid[a].total_cmp(&lambda_grid[b]));
    let sorted_grid: Vec<f64> = grid_order.iter().map(|&g| lambda_grid[g]).collect();
    let cells: Vec<usize> = sample
        .values()
        .iter()
        .map(|&v| sorted_grid.partition_point(|&l| l < v))
        .collect();

    let g = lambda_grid.len();
    let mut sq_err = vec![0.0f64; g];
    let mut hist = vec![0usize; g + 1];
    for _ in 0..b {
        hist.fill(0);
        for _ in 0..n {
            hist[cells[rng.random_range(0..n)]] += 1;
        }
        let mut below = 0usize;
        for (j, &go) in grid_order.iter().enumerate() {
            below += hist[j];
            let dev = pi0_at(below, sorted_grid[j]) - target;
            sq_err[go] += dev * dev;
        }
    }
    let mse: Vec<f64> = sq_err.iter().map(|&s| s / b as f64).collect();

    let mut ranked = mse.clone();
    ranked.sort_by(f64::total_cmp);
    let median = if g % 2 == 1 {
        ranked[g / 2]
    } else {
        0.5 * (ranked[g / 2 - 1] + ranked[g / 2])
    };

    let selected: Vec<f64> = base
        .iter()
        .zip(&mse)
        .filter(|(_, &m)| m <= median)
        .map(|(&e, _)| e)
        .collect();
    let pi0_raw = selected.iter().sum::<f64>() / selected.len() as f64;
    Ok(ProportionEstimate::from_pi0_raw(pi0_raw, n, None, "jd"))
}
