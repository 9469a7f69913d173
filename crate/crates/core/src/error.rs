use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus {0}: expected an odd prime")]
    InvalidModulus(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("coefficient ring does not contain {0}")]
    UnsupportedRing(String),

    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("coefficient ring mismatch")]
    RingMismatch,

    #[error("invalid dimension m = {0}: {1}")]
    InvalidDimension(usize, String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("parity error: {0}")]
    Parity(String),

    #[error("vector left V under conjugation: {0}")]
    Membership(String),

    #[error("invalid sign change: {0}")]
    InvalidSignChange(String),

    #[error("invalid signed permutation: {0}")]
    InvalidPermutation(String),

    #[error("search infeasible: {0}")]
    Infeasible(String),

    #[error("search bound {0} exhausted")]
    BoundExhausted(u64),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
