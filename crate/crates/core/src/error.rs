use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid order must be at least {min}, got {got}")]
    GridTooSmall { min: usize, got: usize },

    #[error("point {0} lies outside the solution interval")]
    OutOfDomain(f64),

    #[error("matrix is singular (zero pivot in column {0})")]
    Singular(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("boundary conditions do not determine a unique solution")]
    DegenerateBoundaryConditions,

    #[error("nodes/orders do not determine a unique solution")]
    DegenerateInterfaces,

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("invalid boundary condition: {0}")]
    InvalidBoundaryCondition(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("matrix of size {size} exceeds the dense analysis limit {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("singular value decomposition did not converge after {0} sweeps")]
    NoConvergence(usize),
}
