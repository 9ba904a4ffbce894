//! Crate-wide error type.

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller-supplied value is outside its documented domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Node/panel geometry cannot be evaluated (behind panel, zero distance).
    #[error("geometry error: {0}")]
    Geometry(String),

    /// Evaluation hit a mathematical singularity.
    #[error("singularity: {0}")]
    Singularity(String),

    /// The experiment configuration does not validate.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// The instance cannot be solved (e.g. more sources than IRSs).
    #[error("infeasible instance: {0}")]
    Infeasible(String),

    /// Exhaustive enumeration would exceed the configured candidate cap.
    #[error("candidate cap exceeded: {count} candidates > cap {cap}")]
    CapExceeded { count: u128, cap: u128 },

    /// An internal contract was violated; indicates a bug in the caller.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid_input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn geometry(msg: impl Into<String>) -> Self {
        Error::Geometry(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
