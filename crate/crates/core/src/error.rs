use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid channel profile: {0}")]
    InvalidProfile(String),

    #[error("invalid activity model: {0}")]
    InvalidModel(String),

    #[error("invalid gain distribution: {0}")]
    InvalidDistribution(String),

    #[error("configuration error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no sign change found while expanding the bracket up to {upper:e}")]
    NoBracket { upper: f64 },

    #[error("fixed point not converged after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("closed-form denominator vanishes for these taps")]
    DegenerateTaps,

    #[error("enumeration support of {terms} terms exceeds the cap of {cap}")]
    SupportTooLarge { terms: u128, cap: u128 },

    #[error("band factorization lost positive definiteness at row {row}")]
    NumericalFailure { row: usize },

    #[error("per-active-user rate undefined when every user is silent (q = 1)")]
    DivisionByZero,
}
