use thiserror::Error;

/// Errors produced by the library.
///
/// Refutations (failed conditions, distinct invariants) are never errors;
/// they are reported as data. These variants cover malformed input,
/// violated preconditions and exhausted search budgets.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed poset view: {0}")]
    MalformedView(String),

    #[error("subset error: {0}")]
    Subset(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("invalid functor: {0}")]
    InvalidFunctor(String),

    #[error("words are not parallel: {0}")]
    NotParallel(String),

    #[error("diagram error: {0}")]
    Diagram(String),

    #[error("diagram has not been verified strict (use force to override)")]
    Unverified,

    #[error("search space exceeds fuel ({0})")]
    FuelExceeded(u64),

    #[error("integer overflow in exact arithmetic: {0}")]
    Overflow(String),

    #[error("invalid descent datum: {0}")]
    InvalidDescent(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
