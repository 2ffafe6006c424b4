use thiserror::Error;

use crate::asymptotics::A2Status;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("p-value at index {index} is {value}, outside [0, 1]")]
    OutOfRange { index: usize, value: f64 },

    #[error("p-value at index {index} is NaN")]
    NotANumber { index: usize },

    #[error("sample too small: n = {n}, need at least {min}")]
    TooSmall { n: usize, min: usize },

    #[error("alpha must lie in [1/2, 1], got {0}")]
    BadAlpha(f64),

    #[error("c must lie in [0, 1/2), got {0}")]
    BadC(f64),

    #[error("search range empty: first admissible index {lo} exceeds n/2 = {hi}")]
    EmptySearchRange { lo: usize, hi: usize },

    #[error("p at the change-point equals 1, Storey denominator vanishes")]
    DegenerateLambda,

    #[error("lambda must lie in (0, 1), got {0}")]
    BadLambda(f64),

    #[error("invalid bootstrap grid: {0}")]
    BadGrid(&'static str),

    #[error("bootstrap replicate count must be at least 1")]
    BadB,

    #[error("level must lie in (0, 1), got {0}")]
    BadLevel(f64),

    #[error("pi0 estimate must lie in [1/n, 1], got {0}")]
    BadPi0(f64),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("quantile input must lie in (0, 1), got {0}")]
    BadQuantileInput(f64),

    #[error("cdf argument must lie in [0, 1], got {0}")]
    BadX(f64),

    #[error("t must lie in (0, 1/2], got {0}")]
    BadT(f64),

    #[error("objective has no unique interior maximum: {0}")]
    A2Violated(A2Status),

    #[error("invalid scenario: {0}")]
    BadScenario(String),

    #[error("invalid quantile model: {0}")]
    BadModel(String),
}
