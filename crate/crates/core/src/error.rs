use thiserror::Error;

pub type Result<T> = std::result::Result<T, QError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("invalid base q = {0}; need 0 < q < 1")]
    InvalidBase(f64),
    #[error("invalid tolerance {0}; need a positive finite value")]
    InvalidTolerance(f64),
    #[error("series did not converge within {terms} terms")]
    NonConvergence { terms: usize },
    #[error("series diverges: {0}")]
    Divergent(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("pole proximity in {factor} (|value| = {magnitude:e})")]
    PoleProximity { factor: String, magnitude: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("positivity violated: {0}")]
    Positivity(String),
    #[error("grid index k = {k} outside |k| <= {cap}")]
    OutOfRange { k: i32, cap: i32 },
    #[error("overflow while evaluating {0}")]
    Overflow(String),
    #[error("domain error: {0}")]
    Domain(String),
}
