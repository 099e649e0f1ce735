use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested moment is infinite.
    #[error("moment of order {order} does not exist (requires r < {bound})")]
    MomentNonexistent { order: f64, bound: f64 },

    /// An infinite series hit its term cap before meeting the tolerance.
    #[error("series did not converge within {terms} terms (last relative change {last_change:e})")]
    SeriesDivergence { terms: usize, last_change: f64 },

    /// An iterative solver ran out of iterations.
    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    /// A root could not be bracketed.
    #[error("could not bracket a root: {0}")]
    Bracketing(String),

    /// The data cannot support the requested fit.
    #[error("ill-posed fit: {0}")]
    IllPosed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

/// Rejects NaN and non-positive values.
pub(crate) fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_nan() || v <= 0.0 {
        Err(domain(format!("{name} must be positive, got {v}")))
    } else {
        Ok(())
    }
}
