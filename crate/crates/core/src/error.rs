use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mode index {index} out of range for a {n_modes}-mode register")]
    ModeIndex { index: usize, n_modes: usize },

    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("photon number {n} exceeds cutoff {n_max}")]
    Cutoff { n: usize, n_max: usize },

    #[error("impossible detection event: {0}")]
    ImpossibleEvent(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
