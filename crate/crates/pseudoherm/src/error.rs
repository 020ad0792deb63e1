use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("metric is not Hermitian: residual {residual:.3e} exceeds {tol:.3e}")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("metric is numerically singular")]
    SingularMetric,

    #[error("operator is not unitary: residual {residual:.3e} exceeds {tol:.3e}")]
    NotUnitary { residual: f64, tol: f64 },

    #[error("matrix does not admit a complete biorthonormal eigensystem within working precision (condition estimate {cond:.3e})")]
    DefectiveMatrix { cond: f64 },

    #[error("Schur iteration failed to converge")]
    SchurFailed,

    #[error("complex eigenvalues cannot be matched into conjugate pairs; no metric exists")]
    UnpairedSpectrum,

    #[error("basis matrix is not invertible")]
    SingularBasis,

    #[error("gauge block {block} is numerically singular: the metric does not pair these eigenspaces")]
    SingularGaugeBlock { block: usize },

    #[error("{what} must be {parity} on the grid; violated at nodes {nodes:?}")]
    ParityViolation {
        what: String,
        parity: &'static str,
        nodes: Vec<usize>,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("time integration produced a non-finite state at t = {t}")]
    NonFiniteState { t: f64 },

    #[error("trajectories do not share time stamps: {0}")]
    TrajectoryMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
