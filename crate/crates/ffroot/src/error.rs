use thiserror::Error;

/// Errors shared by every layer of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus failed the primality check")]
    NotPrime,
    #[error("arguments are not coprime")]
    NotCoprime,
    #[error("element is not a square")]
    NotASquare,
    #[error("element is not a t-th power")]
    NotAPower,
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("divisor must be monic")]
    NonMonic,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different prime moduli")]
    ModulusMismatch,
    #[error("elements belong to different field contexts")]
    FieldMismatch,
    #[error("degree constraint violated: {0}")]
    DegreeViolation(&'static str),
    #[error("unsupported input: {0}")]
    Unsupported(&'static str),
    #[error("randomized search exceeded its retry bound")]
    RetryLimitExceeded,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
