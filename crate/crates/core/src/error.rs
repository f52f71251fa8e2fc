use thiserror::Error;

/// Errors shared across the library.
///
/// The CLI maps these onto exit codes: capacity problems exit 3, every
/// other error here is a usage problem and exits 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("out of range: {0}")]
    Range(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("bad injected draw: {0}")]
    Injection(String),
    #[error("inconsistent regime: {0}")]
    Regime(String),
    #[error("degenerate test: {0}")]
    DegenerateTest(String),
    #[error("insufficient sample: {0}")]
    InsufficientSample(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
