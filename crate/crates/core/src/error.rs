use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("size mismatch: expected permutations of size {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("n must be at least 1")]
    ZeroSize,

    #[error("not a permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid variable matrix: {0}")]
    InvalidVarMatrix(String),

    #[error("duplicate column index {0}")]
    DuplicateIndex(usize),

    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("n = {n} exceeds the enumeration cap of {cap}")]
    OverCap { n: usize, cap: usize },

    #[error("matrix is not a member of Phi: {0}")]
    NotInPhi(String),

    #[error("negative entry at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("solver invariant violated: {0}")]
    Solver(String),
}

pub type Result<T> = std::result::Result<T, Error>;
