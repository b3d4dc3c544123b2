use thiserror::Error;

/// Errors shared across the crate. Verification *outcomes* (a claim that is
/// numerically false) are not errors; they are reported through the various
/// report types. Errors mean the requested object could not be built at all.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed request: bad site index, wrong coupling count, empty input.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Input outside the operation's domain: illegal occupation pattern,
    /// operator attached to the wrong sector, index out of range.
    #[error("domain error: {0}")]
    Domain(String),

    /// A build-time self-check failed: the constructed operator does not have
    /// the structure its definition promises.
    #[error("construction error: {what} (residual {residual:.3e}, tolerance {tol:.3e})")]
    Construction {
        what: &'static str,
        residual: f64,
        tol: f64,
    },

    /// The algebraic structure expected of the model did not materialize
    /// (wrong commutant dimension, no projector with the expected rank, ...).
    #[error("structure error: {0}")]
    Structure(String),

    /// Problem size exceeds a configured dense-mode limit.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// An iterative solver ran out of iterations before reaching tolerance.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// A projection produced a numerically zero vector.
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn construction(what: &'static str, residual: f64, tol: f64) -> Self {
        Error::Construction {
            what,
            residual,
            tol,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
