use thiserror::Error;

/// Errors raised by the tridiagonal Toeplitz routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("off-diagonal entries must be nonzero (a = {a}, c = {c})")]
    ZeroOffDiagonal { a: f64, c: f64 },

    #[error("matrix order must be at least 1, got {0}")]
    InvalidOrder(usize),

    #[error("matrix parameters must be finite")]
    NonFinite,

    #[error("matrix is not symmetrisable: a*c = {product} <= 0")]
    NotSymmetrisable { product: f64 },

    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("value exceeds the floating-point range (ln|value| = {log_mag})")]
    Overflow { log_mag: f64 },

    #[error("matrix is numerically singular")]
    SingularMatrix,

    #[error("not in the gapped regime: x = b/(2s) = {x} <= 1")]
    NotInGappedRegime { x: f64 },

    #[error("near-singular pivot {pivot:e} at row {row}")]
    NearSingularPivot { row: usize, pivot: f64 },

    #[error("repunit base must be positive (and an integer on exact paths), got {0}")]
    InvalidBase(f64),

    #[error("vector must be nonzero")]
    ZeroVector,
}

pub type Result<T> = std::result::Result<T, Error>;
