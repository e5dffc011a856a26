use alloc::boxed::Box;

use crate::orgen::OrgenTrace;
use crate::problem::ElasticNetSolution;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("column {0} has (near) zero norm")]
    ZeroColumn(usize),
    #[error("vector has (near) zero norm")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("oracle point is zero; the oracle region is undefined")]
    DegenerateOracle,
    #[error("inner solver hit its iteration limit with residual {residual:e}")]
    MaxIterationsExceeded {
        residual: f64,
        best: Box<ElasticNetSolution>,
    },
    #[error("active-set driver hit its outer iteration limit")]
    MaxOuterIterationsExceeded {
        best: Box<ElasticNetSolution>,
        trace: Box<OrgenTrace>,
    },
    #[error("linear system is singular")]
    SingularSystem,
    #[error("point is orthogonal to every atom of the dictionary")]
    OrthogonalPoint,
    #[error("gamma_0 is undefined at lambda = 0")]
    LambdaZero,
    #[error("eigensolver failed")]
    EigenSolverFailure,
    #[error("invalid subspace dimensions: {0}")]
    InvalidDims(&'static str),
}

impl Error {
    /// Stable machine-readable code, used in CLI error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroColumn(_) => "ZERO_COLUMN",
            Error::ZeroVector => "ZERO_VECTOR",
            Error::DimensionMismatch { .. } => "DIMENSION_MISMATCH",
            Error::LengthMismatch { .. } => "LENGTH_MISMATCH",
            Error::NonFinite => "NON_FINITE",
            Error::InvalidParameter(_) => "INVALID_PARAMETER",
            Error::DegenerateOracle => "DEGENERATE_ORACLE",
            Error::MaxIterationsExceeded { .. } => "MAX_ITERATIONS_EXCEEDED",
            Error::MaxOuterIterationsExceeded { .. } => "MAX_OUTER_ITERATIONS_EXCEEDED",
            Error::SingularSystem => "SINGULAR_SYSTEM",
            Error::OrthogonalPoint => "ORTHOGONAL_POINT",
            Error::LambdaZero => "LAMBDA_ZERO",
            Error::EigenSolverFailure => "EIGEN_SOLVER_FAILURE",
            Error::InvalidDims(_) => "INVALID_DIMS",
        }
    }
}
