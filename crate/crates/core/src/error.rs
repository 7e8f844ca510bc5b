use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("backend mismatch: {left} vs {right}")]
    BackendMismatch { left: String, right: String },
    #[error("operation not supported on backend {0}")]
    UnsupportedBackend(String),
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
    #[error("derivative is the zero polynomial")]
    DerivativeZero,
    #[error("polynomial has degree zero")]
    DegreeZero,
    #[error("field of size {size} exceeds the scan limit")]
    FieldTooLarge { size: u128 },
    #[error("root finder did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("eigenvalues do not split over the backend; use the complex backend")]
    EigenvaluesNotSplit,
    #[error("fiber over {0} has no point in the backend; use the complex backend")]
    FiberNotSplit(String),
    #[error("numerically defective: {0}")]
    NumericallyDefective(String),
    #[error("unknown entire function '{0}'")]
    UnknownFunction(String),
    #[error("search space of 2^{bits:.1} candidates exceeds the cap of 2^{cap}")]
    SearchSpaceTooLarge { bits: f64, cap: u32 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    /// A non-invertible, nonzero element was met in a number field whose
    /// modulus is not irreducible. Carries a proper factor of the modulus
    /// (rational coefficients, low degree first).
    #[error("zero divisor found; modulus splits")]
    ZeroDivisor(Vec<num::BigRational>),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
