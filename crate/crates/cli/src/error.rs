use std::fmt;

/// Command failures, carrying the process exit code.
///
/// 2 means bad input (config, trace file, arguments), 3 means the
/// requested topology/representation pair has no supported evaluation.
/// A verification mismatch is not an error; `verify` reports it through
/// exit code 1 directly.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Unsupported(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Unsupported(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "error: {msg}"),
            CliError::Unsupported(msg) => write!(f, "unsupported: {msg}"),
        }
    }
}

impl From<maxplus_queues::Error> for CliError {
    fn from(err: maxplus_queues::Error) -> Self {
        match err {
            maxplus_queues::Error::UnsupportedTopology(msg) => CliError::Unsupported(msg),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Input(err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
