use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A point was requested outside the closed triangle `0 <= t <= x <= pi`
    /// or outside the documented domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no sign change on [{a}, {b}]: f(a) = {fa}, f(b) = {fb}")]
    Bracket { a: f64, b: f64, fa: f64, fb: f64 },

    /// The Cauchy integration produced a non-finite value.
    #[error("non-finite solution value at grid index {index} (lambda = {lambda:e})")]
    Overflow { index: usize, lambda: f64 },

    #[error("eigenvalue scan failed: {0}")]
    ScanRange(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerics themselves (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Bracket { .. } | Error::Overflow { .. } | Error::ScanRange(_)
        )
    }
}
