use std::path::PathBuf;

use frame_rkhs::FrameError;
use thiserror::Error;

/// Failures that end a command, each mapped to a fixed process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Schema { path: PathBuf, message: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Math(#[from] FrameError),
}

impl CliError {
    pub fn schema(path: &std::path::Path, message: impl Into<String>) -> Self {
        CliError::Schema {
            path: path.to_path_buf(),
            message: message.into(),
        }
    }

    /// 1: file access, 2: malformed input or arguments, 3: degenerate system.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Read { .. } | CliError::Write { .. } => 1,
            CliError::Schema { .. } | CliError::InvalidArgument(_) => 2,
            CliError::Math(e) => match e {
                FrameError::ZeroSpan
                | FrameError::NotAFrame
                | FrameError::NotPositiveSemidefinite(_)
                | FrameError::NoConvergence { .. } => 3,
                _ => 2,
            },
        }
    }
}
