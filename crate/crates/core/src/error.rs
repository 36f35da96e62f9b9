//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalar modes differ: {0} vs {1}")]
    ModeMismatch(String, String),
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("matrix is not skew-symmetric")]
    NotSkewSymmetric,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(String),
    #[error("level {ell} is not coprime to invariant factor {factor}")]
    LevelNotCoprime { ell: u32, factor: String },
    #[error("negative exponent in a polynomial presentation")]
    NegativeExponent,
    #[error("element is not a unit")]
    NotUnit,
    #[error("({0}, {1}) is not a pair of coprime positive integers")]
    NotCoprime(i64, i64),
    #[error("scalar {0} is not of the form c*q^e")]
    NotMonomial(String),
    #[error("integer overflow: {0}")]
    Overflow(String),
    #[error("{0}")]
    Domain(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
