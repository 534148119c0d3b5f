use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("requested truncation order {requested} exceeds the reliable order {available} of the inputs")]
    TruncationExceeded { requested: usize, available: usize },
    #[error("component of order {order} is not homogeneous of degree {expected}")]
    NonHomogeneous { order: usize, expected: i64 },
    #[error("not a total x-derivative: {0}")]
    NotTotalDerivative(String),
    #[error("no antiderivative in u found for {0}")]
    NoAntiderivative(String),
    #[error("invalid Miura step: {0}")]
    InvalidStep(String),
    #[error("leading term of the transformation is not invertible: {0}")]
    NonInvertible(String),
    #[error("rank equation for {0} could not be solved")]
    UnsolvableRank(String),
    #[error("non-triangular system at order {order}: {detail}")]
    NonTriangular { order: usize, detail: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
