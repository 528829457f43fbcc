use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Exit status for configuration and assumption problems.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status for unreadable or malformed input data.
pub const EXIT_DATA: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("practical assumption violated: {0}")]
    Assumption(String),

    #[error("{path}:{line}: {message}")]
    Row {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{path}: {message}")]
    Data { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Core(#[from] pvoros_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use pvoros_core::Error as E;
        match self {
            CliError::Config(_) | CliError::Assumption(_) => EXIT_CONFIG,
            CliError::Core(
                E::InvalidCostParameter(_)
                | E::NonPositiveRatio(_)
                | E::InvalidAlpha(_)
                | E::InvalidKappa(_)
                | E::DegenerateRegion(_)
                | E::UnsupportedCase(_)
                | E::NeverAlarmBound { .. }
                | E::InvalidCostSpec(_)
                | E::TooFewCandidates
                | E::NoCandidates
                | E::DuplicateName(_),
            ) => EXIT_CONFIG,
            _ => EXIT_DATA,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
