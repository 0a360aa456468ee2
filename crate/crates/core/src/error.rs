use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input violates a documented precondition.
    #[error("validation error: {0}")]
    Validation(String),

    /// An iterative or dense solver failed to converge.
    #[error("{solver} did not converge after {iterations} iterations")]
    NoConvergence { solver: &'static str, iterations: usize },

    /// A dense object would exceed the configured memory budget.
    #[error("requested {requested} bytes exceeds the dense memory budget of {budget} bytes")]
    Capacity { requested: u128, budget: u128 },

    /// Every excited manifold is dark under the transition operator.
    #[error("no bright state: all transition amplitudes are below {threshold:e}")]
    NoBrightState { threshold: f64 },

    #[error("config error in {path}: {message}")]
    Config { path: PathBuf, message: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 1 for bad input, 2 for numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NoConvergence { .. } | Error::NoBrightState { .. } => 2,
            _ => 1,
        }
    }

    /// Short tag written to the `status` column of result tables.
    pub fn status_tag(&self) -> &'static str {
        match self {
            Error::Validation(_) => "invalid",
            Error::NoConvergence { .. } => "no_convergence",
            Error::Capacity { .. } => "capacity",
            Error::NoBrightState { .. } => "no_bright_state",
            Error::Config { .. } => "config",
            Error::Io { .. } | Error::Csv(_) => "io",
        }
    }
}
