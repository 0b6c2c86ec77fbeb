use std::path::PathBuf;

use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },

    #[error("invalid instance: {0}")]
    Validation(String),

    #[error("invalid solution: {0}")]
    InvalidSolution(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("infeasible instance: {0}")]
    InfeasibleInstance(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("oracle limit exceeded: {0}")]
    LimitExceeded(String),

    #[error("instance generation failed: {0}")]
    GenerationFailed(String),

    /// Raised only by the step-verification mode of the annealer.
    #[error("engine invariant broken: {0}")]
    EngineInvariant(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
