use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DcqdError {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("matrix is singular at pivot {pivot}")]
    SingularMatrix { pivot: usize },
    #[error("matrix is not Hermitian (asymmetry {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("degenerate input state: {0}")]
    DegenerateInput(String),
    #[error("channel is not completely positive (min chi eigenvalue {min_eig:.3e})")]
    NotCp { min_eig: f64 },
    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },
    #[error("contrast eps*eps' = {0:.3e} is too small to invert")]
    ZeroContrast(f64),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("noise mixing matrix is singular")]
    SingularNoise,
    #[error("linear system is ill-conditioned (cond = {cond:.3e})")]
    IllConditioned { cond: f64 },
    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
}

pub type Result<T> = std::result::Result<T, DcqdError>;
