use alloc::string::String;

/// Errors produced by the algorithms in this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A Schur complement was requested on a (numerically) zero pivot.
    #[error("zero pivot at index {index}")]
    ZeroPivot { index: usize },
    /// The matrix is singular where an inverse was required.
    #[error("matrix is singular")]
    Singular,
    /// An iterative method hit its iteration cap.
    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize },
    /// A boundary realization was requested for a vector that is not on the boundary.
    #[error("vector is not on the cone boundary (reciprocal sum {reciprocal_sum:e})")]
    InconsistentBoundary { reciprocal_sum: f64 },
    /// A sampler exhausted its retry budget.
    #[error("sampler failed after {attempts} attempts")]
    Sampling { attempts: usize },
    /// A computation produced a result that fails its own post-condition.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// A checked theorem was contradicted by a concrete instance.
    #[error("falsified: {0}")]
    Falsified(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
