use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, JumpsiftError>;

#[derive(Debug, Error)]
pub enum JumpsiftError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    /// The normalized statistic has a zero denominator.
    #[error("degenerate statistic: {0}")]
    DegenerateStatistic(String),

    #[error("config error at `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("io error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed data in {}: {message}", path.display())]
    Format { path: PathBuf, message: String },
}

impl JumpsiftError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Self::InvalidArgument(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Self::Unsupported(msg.into())
    }

    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by user input or configuration, as opposed to
    /// failures while running.
    pub fn is_config_error(&self) -> bool {
        matches!(self, Self::Config { .. } | Self::InvalidArgument(_))
    }
}
