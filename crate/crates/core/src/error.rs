use thiserror::Error;

/// Errors raised by the algebra, measure and kinematics layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot add scalars with different unit monomials: {left} vs {right}")]
    UnitMismatch { left: String, right: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("hodge star on the sigma block received a non-sigma generator")]
    NonSigmaInput,
    #[error("element is not homogeneous of degree {0}")]
    NotHomogeneous(usize),
    #[error("linear solve failed: {0}")]
    SolveFailure(String),
    #[error("element does not lie in the invariant subalgebra")]
    NotInSubalgebra,
    #[error("the exceptional element requires n odd and p = q = (n-1)/2 (got n={n}, p={p})")]
    ExceptionalUnavailable { n: usize, p: usize },
    #[error("bad index set: {0}")]
    BadIndexSet(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
