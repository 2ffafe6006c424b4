//! Benjamini-Hochberg step-up procedure, its adaptive variant, and
//! FDP/power scoring against known ground truth.

use crate::error::{Error, Result};
use crate::sample::PValueSample;

/// Effective levels are capped below 1 so a tiny pi0 estimate cannot demand
/// a level ≥ 1.
const LEVEL_CAP: f64 = 1.0 - 1e-9;

/// Outcome of a step-up procedure on a sample of `n` hypotheses.
#[derive(Debug, Clone, PartialEq)]
pub struct RejectionSet {
    n: usize,
    /// k_hat of the step-up rule; 0 when nothing is rejected.
    pub threshold_rank: usize,
    /// Original (pre-sort) indices of the rejected hypotheses; exactly the
    /// `threshold_rank` smallest p-values.
    pub rejected_original_indices: Vec<usize>,
    /// The level actually used (alpha, or alpha / pi0_hat when adaptive).
    pub effective_level: f64,
}

impl RejectionSet {
    pub fn rejected_count(&self) -> usize {
        self.threshold_rank
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Ground-truth labels, aligned to original (pre-sort) indices.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthLabels {
    is_false_null: Vec<bool>,
}

impl TruthLabels {
    pub fn new(is_false_null: Vec<bool>) -> Self {
        Self { is_false_null }
    }

    pub fn len(&self) -> usize {
        self.is_false_null.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_false_null.is_empty()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.is_false_null
    }

    pub fn count_false_nulls(&self) -> usize {
        self.is_false_null.iter().filter(|&&b| b).count()
    }
}

/// Per-replicate confusion summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalMetrics {
    /// False discovery proportion V / max(R, 1).
    pub fdp: f64,
    pub true_discoveries: usize,
    /// True discoveries / number of false nulls; 0/0 -> 0.
    pub power: f64,
}

/// The BH step-up rule: reject the k_hat smallest p-values where
/// k_hat = max{k ≥ 1 : p_(k) ≤ level·k/n}, or nothing if no such k.
pub fn bh_rejections(sample: &PValueSample, level: f64) -> Result<RejectionSet> {
    if !(level > 0.0 && level < 1.0) || level.is_nan() {
        return Err(Error::BadLevel(level));
    }
    let n = sample.n();
    let nf = n as f64;
    let p = sample.values();
    let mut k = 0;
    for i in (1..=n).rev() {
        if p[i - 1] <= level * i as f64 / nf {
            k = i;
            break;
        }
    }
    Ok(RejectionSet {
        n,
        threshold_rank: k,
        rejected_original_indices: sample.original_indices()[..k].to_vec(),
        effective_level: level,
    })
}

/// BH at the boosted level min(cap, level / pi0_hat).
pub fn adaptive_bh(sample: &PValueSample, level: f64, pi0_hat: f64) -> Result<RejectionSet> {
    if !(level > 0.0 && level < 1.0) || level.is_nan() {
        return Err(Error::BadLevel(level));
    }
    let floor = 1.0 / sample.n() as f64;
    if !(floor..=1.0).contains(&pi0_hat) || pi0_hat.is_nan() {
        return Err(Error::BadPi0(pi0_hat));
    }
    let effective = (level / pi0_hat).min(LEVEL_CAP);
    bh_rejections(sample, effective)
}

/// Score a rejection set against ground truth.
pub fn confusion_metrics(rejections: &RejectionSet, truth: &TruthLabels) -> Result<EvalMetrics> {
    if rejections.n != truth.len() {
        return Err(Error::LengthMismatch {
            left: rejections.n,
            right: truth.len(),
        });
    }
    let r = rejections.threshold_rank;
    let true_discoveries = rejections
        .rejected_original_indices
        .iter()
        .filter(|&&i| truth.is_false_null[i])
        .count();
    let false_discoveries = r - true_discoveries;
    let n1 = truth.count_false_nulls();
    Ok(EvalMetrics {
        fdp: false_discoveries as f64 / r.max(1) as f64,
        true_discoveries,
        power: if n1 == 0 {
            0.0
        } else {
            true_discoveries as f64 / n1 as f64
        },
    })
}

/// Means over replicates: (FDR, mean power).
pub fn fdr_power_summary(per_replicate: &[EvalMetrics]) -> Result<(f64, f64)> {
    if per_replicate.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = per_replicate.len() as f64;
    let fdr = per_replicate.iter().map(|m| m.fdp).sum::<f64>() / n;
    let power = per_replicate.iter().map(|m| m.power).sum::<f64>() / n;
    Ok((fdr, power))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(values: &[f64]) -> PValueSample {
        PValueSample::new(values.to_vec()).unwrap()
    }

    #[test]
    fn bh_hand_example() {
        // p_(k) <= 0.05 k/6 holds for k = 1, 2 and fails afterwards.
        let s = sample(&[0.001, 0.012, 0.04, 0.3, 0.5, 0.9]);
        let r = bh_rejections(&s, 0.05).unwrap();
        assert_eq!(r.threshold_rank, 2);
        assert_eq!(r.rejected_count(), 2);
        assert_eq!(r.rejected_original_indices, vec![0, 1]);
    }

    #[test]
    fn bh_rejects_nothing_above_level() {
        let s = sample(&[0.3, 0.5, 0.7, 0.9]);
        let r = bh_rejections(&s, 0.05).unwrap();
        assert_eq!(r.threshold_rank, 0);
        assert!(r.rejected_original_indices.is_empty());
    }

    #[test]
    fn bh_rejects_everything_when_all_p_below_level() {
        let s = sample(&[0.01, 0.02, 0.03, 0.04]);
        let r = bh_rejections(&s, 0.05).unwrap();
        assert_eq!(r.threshold_rank, 4);
        assert_eq!(r.rejected_original_indices.len(), 4);
    }

    #[test]
    fn bh_maps_rejections_to_original_indices() {
        let s = sample(&[0.9, 0.001, 0.5, 0.012]);
        let r = bh_rejections(&s, 0.05).unwrap();
        assert_eq!(r.threshold_rank, 2);
        assert_eq!(r.rejected_original_indices, vec![1, 3]);
    }

    #[test]
    fn bh_rejects_bad_level() {
        let s = sample(&[0.1, 0.2]);
        for level in [0.0, 1.0, -0.1, 2.0] {
            assert_eq!(
                bh_rejections(&s, level).unwrap_err(),
                Error::BadLevel(level)
            );
        }
    }

    #[test]
    fn adaptive_with_unit_pi0_is_plain_bh() {
        let s = sample(&[0.001, 0.012, 0.04, 0.3, 0.5, 0.9]);
        let plain = bh_rejections(&s, 0.05).unwrap();
        let adaptive = adaptive_bh(&s, 0.05, 1.0).unwrap();
        assert_eq!(plain, adaptive);
    }

    #[test]
    fn adaptive_halving_pi0_doubles_level() {
        let s = sample(&[0.001, 0.012, 0.04, 0.3, 0.5, 0.9]);
        let adaptive = adaptive_bh(&s, 0.05, 0.5).unwrap();
        let doubled = bh_rejections(&s, 0.10).unwrap();
        assert_eq!(adaptive.threshold_rank, doubled.threshold_rank);
        assert!((adaptive.effective_level - 0.10).abs() < 1e-15);
    }

    #[test]
    fn adaptive_caps_effective_level_below_one() {
        let s = sample(&[0.001, 0.012, 0.04, 0.3, 0.5, 0.9]);
        let r = adaptive_bh(&s, 0.9, 1.0 / 6.0).unwrap();
        assert!(r.effective_level < 1.0);
    }

    #[test]
    fn adaptive_rejects_bad_pi0() {
        let s = sample(&[0.1, 0.2, 0.3, 0.4]);
        for pi0 in [0.0, 0.1, 1.5, -1.0] {
            assert_eq!(
                adaptive_bh(&s, 0.05, pi0).unwrap_err(),
                Error::BadPi0(pi0)
            );
        }
    }

    #[test]
    fn metrics_zero_rejections() {
        let s = sample(&[0.3, 0.5, 0.7, 0.9]);
        let r = bh_rejections(&s, 0.05).unwrap();
        let m = confusion_metrics(&r, &TruthLabels::new(vec![true, false, false, false]))
            .unwrap();
        assert_eq!(m.fdp, 0.0);
        assert_eq!(m.power, 0.0);
        assert_eq!(m.true_discoveries, 0);
    }

    #[test]
    fn metrics_exact_recovery() {
        let s = sample(&[0.001, 0.002, 0.8, 0.9]);
        let r = bh_rejections(&s, 0.05).unwrap();
        assert_eq!(r.threshold_rank, 2);
        let m = confusion_metrics(&r, &TruthLabels::new(vec![true, true, false, false]))
            .unwrap();
        assert_eq!(m.fdp, 0.0);
        assert_eq!(m.power, 1.0);
    }

    #[test]
    fn metrics_direct_counts() {
        // 3 rejections, 1 of them a true null, 10 false nulls in total.
        let mut p = vec![0.001, 0.002, 0.003];
        p.extend(std::iter::repeat_n(0.8, 17));
        let s = sample(&p);
        let r = bh_rejections(&s, 0.05).unwrap();
        assert_eq!(r.threshold_rank, 3);
        let mut truth = vec![false; 20];
        truth[0] = true;
        truth[1] = true;
        for t in truth.iter_mut().skip(3).take(8) {
            *t = true;
        }
        let truth = TruthLabels::new(truth);
        assert_eq!(truth.count_false_nulls(), 10);
        let m = confusion_metrics(&r, &truth).unwrap();
        assert!((m.fdp - 1.0 / 3.0).abs() < 1e-15);
        assert!((m.power - 0.2).abs() < 1e-15);
    }

    #[test]
    fn metrics_length_mismatch() {
        let s = sample(&[0.1, 0.2]);
        let r = bh_rejections(&s, 0.05).unwrap();
        assert!(matches!(
            confusion_metrics(&r, &TruthLabels::new(vec![true])),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn summary_is_arithmetic_mean() {
        let a = EvalMetrics {
            fdp: 0.0,
            true_discoveries: 1,
            power: 0.2,
        };
        let b = EvalMetrics {
            fdp: 1.0,
            true_discoveries: 0,
            power: 0.4,
        };
        let (fdr, power) = fdr_power_summary(&[a, b]).unwrap();
        assert_eq!(fdr, 0.5);
        assert!((power - 0.3).abs() < 1e-15);
        let (f1, p1) = fdr_power_summary(&[a]).unwrap();
        assert_eq!((f1, p1), (a.fdp, a.power));
    }

    #[test]
    fn summary_rejects_empty() {
        assert_eq!(fdr_power_summary(&[]).unwrap_err(), Error::EmptyInput);
    }
}
