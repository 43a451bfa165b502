//! Error type shared by all modules.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series hit its term cap before reaching the requested tolerance.
    #[error("series did not converge within {terms} terms")]
    SeriesCap { terms: usize },

    /// Result magnitude exceeds the floating-point range.
    #[error("overflow in {0}")]
    Overflow(&'static str),

    /// An iterative eigensolver hit its sweep cap.
    #[error("eigensolver failed to converge at index {index}")]
    EigenNoConverge { index: usize },

    /// LU elimination met a pivot below the singularity threshold.
    #[error("singular matrix: pivot {pivot:e} at column {col}")]
    SingularMatrix { pivot: f64, col: usize },

    /// Degree above the explicit-formula cap in double-only evaluation mode.
    #[error("degree {n} above explicit-formula cap {cap}; enable the extended-precision path")]
    DegreeCap { n: usize, cap: usize },

    /// Evaluation point excluded for this basis (odd transforms at ξ=0 etc.).
    #[error("excluded evaluation point: {0}")]
    Excluded(String),

    /// Too few near-real eigenvalues survived the spurious-mode filter.
    #[error("only {found} near-real eigenvalues available, {requested} requested")]
    TooFewEigenvalues { found: usize, requested: usize },

    /// Invalid problem or run configuration.
    #[error("config error: {0}")]
    Config(String),

    /// Per-entry quadrature failed to meet its tolerance.
    #[error("quadrature tolerance failure: {0}")]
    Quadrature(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
