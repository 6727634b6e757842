use thiserror::Error;

/// Errors raised by the solvers and the order utilities.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("noise mode index {index} out of range ({modes} modes)")]
    ModeOutOfRange { index: usize, modes: usize },

    #[error("noise path incompatible with problem: {0}")]
    NoiseMismatch(String),

    #[error("incompatible specs for a coupled run: {0}")]
    IncompatibleSpecs(String),

    #[error("forcing incompatible with problem: {0}")]
    ForcingMismatch(String),

    #[error("Newton iteration diverged at step {step}: residual {residual:.3e} after {iterations} iterations")]
    NewtonDivergence {
        step: usize,
        iterations: usize,
        residual: f64,
    },

    #[error("singular tridiagonal system (zero pivot at row {row})")]
    SingularSystem { row: usize },

    #[error("path {path}: {source}")]
    OnPath {
        path: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn on_path(path: usize, source: Error) -> Self {
        Error::OnPath {
            path,
            source: Box::new(source),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
