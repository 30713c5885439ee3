use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("operator is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("time {t} outside path range [0, {total}]")]
    TimeOutOfRange { t: f64, total: f64 },

    #[error("map is not strictly increasing on its domain")]
    NonMonotoneMap,

    #[error("path was not produced by the expected constructor: {0}")]
    MismatchedPath(String),

    #[error("untrackable level crossing at t = {t}: overlap {overlap:.3} below 0.5")]
    UntrackableCrossing { t: f64, overlap: f64 },

    #[error("unitary lacks the expected block structure (off-block norm {off_block:.3e})")]
    BlockStructure { off_block: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("spectral gap condition violated: gap/coupling ratio {ratio:.3} below {required}")]
    GapCondition { ratio: f64, required: f64 },

    #[error("state not present in basis: {0}")]
    StateNotInBasis(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
