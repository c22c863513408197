use thiserror::Error;

/// Errors raised by the algebra engine and the verification layers built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("rank n must be at least 1")]
    ZeroRank,
    #[error("rank n = {n} exceeds the supported maximum {max}")]
    RankTooLarge { n: u32, max: u32 },
    #[error("index {index} is outside 1..={max}")]
    IndexOutOfRange { index: u32, max: u32 },
    #[error("elements belong to different contexts (n = {left} and n = {right})")]
    RankMismatch { left: u32, right: u32 },
    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),
    #[error("not a permutation of 1..={size}: {reason}")]
    NotAPermutation { size: u32, reason: String },
    #[error("invalid mode list: {0}")]
    InvalidModes(String),
    #[error("the series has no coefficient S+_{p}: the index must be negative")]
    NoPlusCoefficient { p: i64 },
    #[error("lie bracket is only defined on elements of degree at most 1 (got degree {0})")]
    DegreeTooHigh(usize),
    #[error("vector has a letter of nonnegative mode: {0}")]
    NotAVacuumVector(String),
    #[error("coefficient {coefficient} is not divisible by {divisor}")]
    InexactDivision { coefficient: String, divisor: String },
    #[error("n = {n} exceeds the oracle limit {limit}")]
    OracleLimit { n: u32, limit: u32 },
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;
