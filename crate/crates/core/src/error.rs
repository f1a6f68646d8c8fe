use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field size {0} exceeds bound {1}")]
    FieldTooLarge(u128, u64),
    #[error("cannot embed GF({p}^{k}) into GF({p}^{m})")]
    NoEmbedding { p: u32, k: u32, m: u32 },
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("{0} is divisible by the characteristic")]
    CharDivides(u64),
    #[error("repeated point in triple")]
    RepeatedPoint,
    #[error("singular matrix")]
    Singular,
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("closure exceeded cap {0}")]
    ClosureCap(usize),
    #[error("roots of unity of order {0} unavailable within the extension cap")]
    NoRootsOfUnity(u64),
    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),
    #[error("degree {0} is below 1 after normalization")]
    DegenerateMap(i64),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("point is not fixed")]
    NotFixed,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("degree {n} is congruent to -1 mod {p}")]
    DegreeMinusOne { n: usize, p: u32 },
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
