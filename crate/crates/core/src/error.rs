use thiserror::Error;

/// Errors raised by validation and numerical routines.
///
/// Numeric payloads are reported as `f64` regardless of the working scalar.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("NotSquare: matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("InvalidDimension: dimension must be at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("DimensionMismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("NotHermitian: max asymmetry {asymmetry:e}")]
    NotHermitian { asymmetry: f64 },

    #[error("NotUnitDiagonal: entry ({index},{index}) = {value}")]
    NotUnitDiagonal { index: usize, value: f64 },

    #[error("NotPositiveDefinite: smallest eigenvalue {min_eigenvalue:e} <= {eps_pd:e}")]
    NotPositiveDefinite { min_eigenvalue: f64, eps_pd: f64 },

    #[error("ConvergenceFailure: {0}")]
    ConvergenceFailure(String),

    #[error("OverlapOutOfRange: s = {s} outside ({lower}, {upper}) for d = {d}")]
    OverlapOutOfRange {
        d: usize,
        s: f64,
        lower: f64,
        upper: f64,
    },

    #[error("OverlapOutOfGoldenRange: s = {s} outside the golden range for d = {d}")]
    OverlapOutOfGoldenRange { d: usize, s: f64 },

    #[error("NotUniformOverlap: Gram matrix is not a real uniform overlap")]
    NotUniformOverlap,

    #[error("ZeroVector: state has zero norm")]
    ZeroVector,

    #[error("NotNormalized: squared norm {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("GramMismatch: states are expressed against different Gram matrices")]
    GramMismatch,

    #[error("NotMaximallyCoherent: |coef|^2 deviates from 1/d by {deviation:e}")]
    NotMaximallyCoherent { deviation: f64 },

    #[error("InvalidDensity: {0}")]
    InvalidDensity(String),

    #[error("ZeroEta: amplitude ratio must be nonzero")]
    ZeroEta,

    #[error("EmptyRange: s_min = {s_min} > s_max = {s_max}")]
    EmptyRange { s_min: f64, s_max: f64 },

    #[error("InvalidStep: step must be positive and finite, got {0}")]
    InvalidStep(f64),

    #[error("InvalidInput: {0}")]
    InvalidInput(String),

    #[error("Internal: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by malformed or out-of-contract input.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::ConvergenceFailure(_) | Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
