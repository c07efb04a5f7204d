use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("generator index {index} outside 1..={dim}")]
    Dimension { index: usize, dim: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("expected an even number of vectors, got {0}")]
    OddLength(usize),

    #[error("vector {index} has norm {norm}, expected 1")]
    NotUnit { index: usize, norm: f64 },

    #[error("invalid spin element: {0}")]
    InvalidElement(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("odd integer required, got {0}")]
    EvenParameter(i64),

    #[error("chart mismatch: expected `{expected}`, got `{found}`")]
    ChartMismatch { expected: String, found: String },

    #[error("no projection declared between `{0}` and `{1}`")]
    ProjectionUndeclared(String, String),

    #[error("point violates the model constraint: {0}")]
    InvalidPoint(String),

    #[error("matrix is not unitary (residual {0:e})")]
    NotUnitary(f64),

    #[error("matrix is not in su(n+1): {0}")]
    NotSu(String),

    #[error("connection does not descend: {0}")]
    NotDescendable(String),

    #[error("level {alpha} is outside the moment image [{lo}, {hi}]")]
    EmptyLevelSet { alpha: f64, lo: f64, hi: f64 },

    #[error("cut level {half_ell} is not strictly inside ({lo}, {hi})")]
    BoundaryCut { half_ell: f64, lo: f64, hi: f64 },

    #[error("missing connection on {0}")]
    MissingConnection(String),
}
