use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("generator index {index} out of range 1..={n}")]
    IndexOutOfRange { index: u32, n: u32 },

    #[error("inverse generators are not available in {0} mode")]
    InverseNotAllowed(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid canonical key: {0}")]
    InvalidKey(String),

    #[error("invalid roof vector: {0}")]
    InvalidRoof(String),

    #[error("budget exceeded: {what} would exceed the limit of {limit}")]
    BudgetExceeded { what: &'static str, limit: u64 },

    #[error("estimator needs at least one completed trial")]
    NoTrials,

    #[error("no reduction events were observed")]
    NoReductions,

    #[error("operation requires {expected} mode")]
    WrongMode { expected: &'static str },

    #[error("burn-in of {burn_in} steps leaves no window in a run of {steps} steps")]
    WindowTooLong { burn_in: u64, steps: u64 },

    #[error("spectrum computation failed: {0}")]
    Spectrum(String),

    #[error("path-count recursion violated at step {step}")]
    RecursionViolated { step: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
