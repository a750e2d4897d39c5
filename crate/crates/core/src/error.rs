use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unphysical state: Bloch vector norm {norm} exceeds 1/2")]
    UnphysicalState { norm: f64 },

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix does not have unit trace (trace {trace})")]
    NotUnitTrace { trace: f64 },

    #[error("matrix is not positive semidefinite (minimum eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("action is not trace preserving (row 0 deviation {deviation:e})")]
    NotTracePreserving { deviation: f64 },

    #[error("not a trace-preserving generator (row 0 deviation {deviation:e})")]
    NotGenerator { deviation: f64 },

    #[error("invalid collision spec: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-invertible map, no generator")]
    NonInvertible,

    #[error("logarithm branch ambiguity")]
    BranchAmbiguity,

    #[error("eigenvector basis is ill-conditioned (condition number {condition:e})")]
    Defective { condition: f64 },
}
