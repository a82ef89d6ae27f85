use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("domain error in {function}: {detail}")]
    Domain { function: &'static str, detail: String },

    #[error("quadrature did not converge after {subdivisions} subdivisions (estimate {estimate:e}, error {error:e})")]
    QuadratureNonConvergence { estimate: f64, error: f64, subdivisions: usize },

    #[error("singular banded system: zero pivot at row {row} of {size} ({context})")]
    SingularSystem { row: usize, size: usize, context: String },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite state at t = {time}: {detail}")]
    NonFinite { time: f64, detail: String },

    #[error(
        "{count} characteristic feet crossed the obstacle (threshold {threshold}); reduce dt below {suggested_dt:e}"
    )]
    FootCrossing { count: usize, threshold: usize, suggested_dt: f64 },

    #[error("no-slip violated: |u| = {magnitude:e} on the boundary (tolerance {tolerance:e})")]
    NoSlipViolation { magnitude: f64, tolerance: f64 },

    #[error("mismatched runs: {0}")]
    Mismatch(String),
}

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { function, detail: detail.into() }
    }
}
