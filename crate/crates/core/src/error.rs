use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Model violates an assumption baked into the surfaces (e.g. the diabatic
    /// coupling changes sign over the sampled domain).
    #[error("unsupported model: {0}")]
    UnsupportedModel(String),

    /// A logarithm or similar received a value outside its domain. Carries the
    /// offending value.
    #[error("numerical domain error: {what} (value {value:e})")]
    NumericalDomain { what: &'static str, value: f64 },

    #[error("stationary-point search failed: {0}")]
    SearchFailure(String),

    #[error("optimization did not converge: {msg} (best |g|inf = {grad_inf:e} after {iterations} iterations)")]
    OptimizationFailure {
        msg: String,
        grad_inf: f64,
        iterations: usize,
    },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("bracketing error: {0}")]
    Bracketing(String),

    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
