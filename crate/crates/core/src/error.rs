use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("element {0} is not in the group")]
    NotInGroup(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("action is not closed on the given coset list")]
    ActionNotClosed,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("permutations do not commute")]
    NotCommuting,
    #[error("order of {0} does not divide the exponent p^k")]
    OrderNotPPower(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("unknown class: {0}")]
    UnknownClass(String),
    #[error("internal mismatch: {0}")]
    InternalMismatch(String),
    #[error("coefficient {0} is not p-integral")]
    IntegralityFailure(String),
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("series is not Weierstrass of the expected degree: {0}")]
    NotWeierstrass(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("parse error: {0}")]
    Parse(String),
}
