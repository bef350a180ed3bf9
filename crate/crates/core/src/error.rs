use thiserror::Error;

/// Errors produced by model construction and evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: {left} vs {right}")]
    DimensionMismatch {
        context: &'static str,
        left: String,
        right: String,
    },

    #[error("customer index {index} out of range 1..={horizon}")]
    IndexOutOfRange { index: usize, horizon: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported topology: {0}")]
    UnsupportedTopology(String),

    #[error("chain enumeration needs {required} chains, over the budget of {budget}")]
    EnumerationBudget { required: u128, budget: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
