use thiserror::Error;

/// Errors surfaced by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("number of input bits {0} outside the supported range 1..={max}", max = crate::boolfunc::MAX_BITS)]
    InvalidArity(usize),
    #[error("majority needs an odd number of bits, got {0}")]
    EvenMajority(usize),
    #[error("malformed function descriptor `{0}`")]
    InvalidDescriptor(String),
    #[error("truth table for n={n} needs {expected} hex digits, got {got}")]
    HexLength { n: usize, expected: usize, got: usize },
    #[error("invalid truth table text: {0}")]
    InvalidTruthTable(String),
    #[error("bit strings differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("overlap s = {0} must lie strictly inside (0, 1)")]
    InvalidOverlap(f64),
    #[error("matrix dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix dimension {0} exceeds the limit {max}", max = crate::linalg::MAX_DIM)]
    SizeOverflow(usize),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e}, largest {largest:e})")]
    NotPsd { eigenvalue: f64, largest: f64 },
    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("numerical accuracy check failed: {0}")]
    Accuracy(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
