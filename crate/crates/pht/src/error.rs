use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the spectral, pseudo-metric, and response pipelines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// Bi-orthonormalization failed: the left/right overlap for one
    /// eigenvector pair fell below tolerance. Typically the input sits at
    /// (or numerically indistinguishable from) an exceptional point.
    #[error("defective matrix: |<L_{index}|R_{index}>| = {overlap:.3e} < tol {tol:.3e}")]
    DefectiveMatrix { index: usize, overlap: f64, tol: f64 },

    #[error("eigenvalue {value} has |Im| above tol but no conjugate partner within {tol:.3e}")]
    UnpairableEigenvalue { value: Complex64, tol: f64 },

    #[error("iteration failed to converge")]
    NoConvergence,

    #[error("matrix is numerically singular (pivot {pivot:.3e})")]
    SingularMatrix { pivot: f64 },

    #[error("operator is not Hermitian: residual {residual:.3e} exceeds {tol:.3e}")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("parameters sit on the exceptional point gamma = delta")]
    ExceptionalPoint,

    #[error("unsupported qubit count {m}: {reason}")]
    UnsupportedM { m: usize, reason: &'static str },

    #[error("dimension budget exceeded: 2^{m} > {max}")]
    DimensionBudget { m: usize, max: usize },

    #[error("polynomial degree {degree} exceeds supported maximum {max}")]
    UnsupportedDegree { degree: usize, max: usize },

    #[error("zero leading coefficient")]
    ZeroLeadingCoefficient,

    /// A spectral term grows faster than the broadening damps, so the
    /// half-line transform does not exist for this state.
    #[error("divergent transform: mode growth rate {rate:.3e} >= broadening {broadening:.3e}")]
    DivergentTransform { rate: f64, broadening: f64 },

    #[error("insufficient span: found {peaks} envelope peaks, need {needed}")]
    InsufficientSpan { peaks: usize, needed: usize },

    #[error("no phase boundary: the grid is single-phase")]
    NoBoundary,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
