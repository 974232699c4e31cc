use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid tuple: {0}")]
    InvalidTuple(String),

    #[error("index {0} out of range for tuple of length {1}")]
    IndexOutOfRange(usize, usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid branch data: {0}")]
    InvalidBranchData(String),

    #[error("invalid residue vector: {0}")]
    InvalidResidueVector(String),

    #[error("branch data is not of the supported form: {0}")]
    OutsideForm(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no contraction exists for {0}")]
    NoContraction(String),

    /// A construction produced a tuple that failed verification.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
