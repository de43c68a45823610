use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A state or series became non-finite. `step` is the index of the input
    /// (or integration step) that produced it.
    #[error("non-finite state at step {step}")]
    Divergence { step: usize },

    #[error("input {value} at index {index} is not admissible for a real-mode product reservoir (needs > 0)")]
    NonPositiveInput { index: usize, value: f64 },

    /// A zero input or zero state wipes out the multiplicative history of a product node.
    #[error("zero input resets the product node history")]
    HistoryReset,

    #[error("recurrent matrix has zero spectral radius and cannot be rescaled")]
    DegenerateSpectrum,

    #[error("design matrix is identically zero")]
    ZeroDesign,

    #[error("target has zero variance")]
    ZeroVariance,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.to_string(),
        }
    }
}
