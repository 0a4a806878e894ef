use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument outside its domain: {0}")]
    Domain(String),

    #[error("matrix is not positive definite (pivot {pivot} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: String, got: String },

    #[error("non-finite response at row {row}: {value}")]
    NonFinite { row: usize, value: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("need at least {needed} samples, got {got}")]
    InsufficientData { needed: u64, got: u64 },

    #[error("normal equations are ill-conditioned (condition estimate {estimate:.3e})")]
    IllConditioned { estimate: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("training diverged at step {step} (loss {loss})")]
    Divergence { step: u64, loss: f64 },

    #[error("batch of {rows} rows is too small for batch statistics")]
    BatchSize { rows: usize },

    #[error("checkpoint error: {0}")]
    Checkpoint(String),
}

impl Error {
    pub(crate) fn shape(expected: impl ToString, got: impl ToString) -> Self {
        Error::Shape {
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }
}
