use thiserror::Error;

/// Errors raised by the estimation stack.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-positive value {value} at index {index}; logarithm undefined")]
    NonPositiveValue { index: usize, value: f64 },

    #[error("series too short: need at least {needed} observations, got {got}")]
    SeriesTooShort { needed: usize, got: usize },

    #[error("series do not overlap in time")]
    NoOverlap,

    #[error("frequency mismatch: {left} vs {right}")]
    FrequencyMismatch { left: u32, right: u32 },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("empty series")]
    Empty,

    #[error("design matrix is rank deficient: column `{column}` is a linear combination of earlier columns")]
    RankDeficient { column: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("unsupported critical-value combination: {0}")]
    UnsupportedCombination(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("guard failure: {0}")]
    GuardMiss(String),
}

impl Error {
    /// True for failures of the numerical machinery rather than of the data.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::RankDeficient { .. }
                | Error::DimensionMismatch(_)
                | Error::DegenerateInput(_)
                | Error::UnsupportedCombination(_)
                | Error::GuardMiss(_)
        )
    }

    /// True when the caller supplied an invalid configuration.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::InvalidSpec(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
