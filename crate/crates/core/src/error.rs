use thiserror::Error;

use crate::exactalg::Ring;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QckError {
    #[error("ring mismatch: {left:?} vs {right:?}")]
    RingMismatch { left: Ring, right: Ring },
    #[error("division by zero")]
    DivisionByZero,
    #[error("substituting 0 for `{0}`, which occurs with a negative exponent")]
    ZeroIntoNegativeExponent(String),
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("negative order {0}")]
    NegativeOrder(i64),
    #[error("modulus is not monic")]
    NonMonic,
    #[error("non-integer input: {0}")]
    NonInteger(String),
    #[error("expected a univariate polynomial in q, found `{0}`")]
    ExtraVariables(String),
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("term limit exceeded: {terms} > {limit}")]
    TermLimit { terms: usize, limit: usize },
    #[error("internal mismatch: {0}")]
    Mismatch(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T, E = QckError> = std::result::Result<T, E>;
