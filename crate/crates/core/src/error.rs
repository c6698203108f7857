//! Error type shared by every numerical module.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OswError {
    #[error("parity violation: {0}")]
    Parity(String),
    #[error("input does not decay at infinity: {0}")]
    NotDecaying(String),
    #[error("alpha must be 1/n for a positive integer n, got {0}")]
    InvalidAlpha(f64),
    #[error("mismatched representations: {0}")]
    Mismatch(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("unknown identity kind `{0}`")]
    UnknownIdentity(String),
    #[error("time {t} is not before the blow-up time {t_star}")]
    BeyondBlowup { t: f64, t_star: f64 },
    #[error("no predicted blow-up: {0}")]
    NoBlowup(String),
    #[error("consistency functional is {value:e}, above tolerance {tol:e}")]
    Consistency { value: f64, tol: f64 },
    #[error("missing series terms: have {have}, need {need}")]
    MissingTerms { have: usize, need: usize },
    #[error("|a| = {a} exceeds the guarded radius {guard}")]
    OutsideRadius { a: f64, guard: f64 },
    #[error("numerical breakdown: {0}")]
    Breakdown(String),
    #[error("insufficient data: {0}")]
    Insufficient(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for OswError {
    fn from(e: std::io::Error) -> Self {
        OswError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for OswError {
    fn from(e: serde_json::Error) -> Self {
        OswError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, OswError>;
