use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mean arguments must be strictly positive and finite, got ({a}, {b})")]
    NonPositiveArgument { a: f64, b: f64 },

    #[error("argument must be strictly positive and finite, got {0}")]
    NonPositiveScalar(f64),

    #[error("order m = {got} is below the minimum {min} required here")]
    OrderTooSmall { got: usize, min: usize },

    #[error("lemma precondition violated: {0}")]
    Precondition(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (asymmetry {asymmetry:e} relative to norm)")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e} below {threshold:e})")]
    NotPositiveSemidefinite { eigenvalue: f64, threshold: f64 },

    #[error(
        "matrix is singular for this operation (min eigenvalue {min_eigenvalue:e} < {threshold:e})"
    )]
    SingularMatrix { min_eigenvalue: f64, threshold: f64 },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("exponent {0} outside [0, 1]")]
    ExponentOutOfRange(f64),

    #[error("empty exponent list")]
    EmptyExponents,

    #[error("unknown check id `{0}`")]
    UnknownCheck(String),

    #[error("invalid instance spec: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
