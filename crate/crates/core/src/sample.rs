//! Validated, sorted p-value samples.

use crate::error::{Error, Result};

/// A validated sample of p-values, stored in ascending order together with
/// the original position of every sorted value, so that rejections can be
/// reported against the caller's index space.
#[derive(Debug, Clone, PartialEq)]
pub struct PValueSample {
    values: Vec<f64>,
    original_indices: Vec<usize>,
}

impl PValueSample {
    /// Validate and sort a vector of p-values.
    ///
    /// Rejects empty input, NaNs, and values outside [0, 1]. Ties are kept
    /// and, thanks to the stable sort, stay in input order.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        for (index, &v) in values.iter().enumerate() {
            if v.is_nan() {
                return Err(Error::NotANumber { index });
            }
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::OutOfRange { index, value: v });
            }
        }
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let sorted = order.iter().map(|&i| values[i]).collect();
        Ok(Self {
            values: sorted,
            original_indices: order,
        })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Sorted p-values, ascending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Original (pre-sort) position of each sorted value.
    pub fn original_indices(&self) -> &[usize] {
        &self.original_indices
    }

    /// Order statistic p_(rank), 1-based.
    pub fn at_rank(&self, rank: usize) -> f64 {
        self.values[rank - 1]
    }

    /// Empirical CDF count #{p_i ≤ lambda}; ties at lambda count as ≤.
    pub fn count_at_most(&self, lambda: f64) -> usize {
        self.values.partition_point(|&v| v <= lambda)
    }
}

/// Free-function spelling of [`PValueSample::new`].
pub fn validate_sample(values: Vec<f64>) -> Result<PValueSample> {
    PValueSample::new(values)
}
