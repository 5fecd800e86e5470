//! CLI error type with process exit codes: 1 usage, 2 data, 3 numerical.

use std::fmt;

use attitude_fusion::Error as LibError;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameter values the user supplied.
    Usage(String),
    /// Unreadable, malformed or inconsistent input data.
    Data(String),
    /// A filter failed numerically while running.
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Data(msg) => write!(f, "data error: {msg}"),
            CliError::Numerical(msg) => write!(f, "numerical error: {msg}"),
        }
    }
}

impl From<LibError> for CliError {
    fn from(err: LibError) -> Self {
        match err {
            LibError::GimbalLock { .. }
            | LibError::DegenerateVector(_)
            | LibError::NumericalFailure(_) => CliError::Numerical(err.to_string()),
            LibError::EmptyDataset
            | LibError::NonMonotonicTime { .. }
            | LibError::LengthMismatch { .. }
            | LibError::EmptyTrack => CliError::Data(err.to_string()),
            LibError::InvalidParams(_) | LibError::InvalidTrajectory(_) => {
                CliError::Usage(err.to_string())
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Data(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
