use thiserror::Error;

/// Errors produced by the section-volume library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("row {row} is linearly dependent on the preceding rows")]
    DependentRow { row: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("the orthogonal complement is trivial (subspace is all of R^{n})")]
    TrivialComplement { n: usize },

    #[error("dilation entries must be positive (entry {index} is {value})")]
    NonPositiveDilation { index: usize, value: f64 },

    #[error("dilation overflow: exp({value}) is not finite")]
    DilationOverflow { value: f64 },

    #[error("column profile is in {found} mode, expected {expected}")]
    WrongMode { expected: &'static str, found: &'static str },

    #[error("column vectors do not span R^{k}")]
    RankDeficient { k: usize },

    #[error("invalid Monte Carlo configuration: {0}")]
    InvalidConfig(String),

    #[error("size limit exceeded: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
