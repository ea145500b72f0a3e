use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("integer coefficient overflow")]
    Overflow,
    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,
    #[error("polynomial is not anti-invariant under the bar involution")]
    NotAntisymmetric,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("generator index {index} out of range for rank {rank}")]
    InvalidGenerator { index: usize, rank: usize },
    #[error("word of length {len} exceeds the configured bound {cap}")]
    WordTooLong { len: usize, cap: usize },
    #[error("enumeration did not saturate within length {cap}; group infinite or too large")]
    InfiniteOrTooLarge { cap: usize },
    #[error("product leaves the truncated element table")]
    Truncated,
    #[error("invalid Coxeter system: {0}")]
    InvalidSystem(String),
    #[error("invalid diagram automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("mixed Hecke algebra parameter modes")]
    ModeMismatch,
    #[error("structure is not pre-canonical: {0}")]
    NotPreCanonical(String),
    #[error("entry ({x}, {y}) of the bar matrix is outside the parity-compatible image")]
    NotParityCompatible { x: usize, y: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
