use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("non-finite coefficient at index {0}")]
    NonFinite(usize),

    #[error("linear factor has degree {0}, expected at most 1")]
    NotLinear(usize),

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("polynomial of degree {0} has no roots to find")]
    DegreeTooLow(usize),

    #[error("precision loss: {0}")]
    PrecisionLoss(String),

    #[error("root solver did not converge for n = {n} after {iterations} iterations at {precision} bits")]
    NonConvergence {
        n: usize,
        iterations: usize,
        precision: u32,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
