use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = SolverError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("field has {found} entries, grid expects {expected}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Density reached a nonpositive value where the EOS or velocity needs it.
    #[error("loss of positivity: density {value:e} at cell {cell}")]
    Positivity { cell: usize, value: f64 },

    #[error("Newton did not converge in {iterations} iterations (residual {residual:e}, target {target:e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        target: f64,
    },

    /// Step damping could not keep the Newton iterate positive.
    #[error("Newton update loses positivity after {halvings} halvings; reduce the time step")]
    PositivityLoss { halvings: usize },

    #[error("time step failed at t = {t}: {source}")]
    StepFailed {
        t: f64,
        #[source]
        source: Box<SolverError>,
    },

    #[error("config error in `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {reason}")]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },
}

impl SolverError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Self::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }
}
