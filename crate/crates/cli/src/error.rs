//! CLI error classification: one machine-parseable code per failure class,
//! mapped to distinct exit codes.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config values or parameter combinations (exit 2).
    Usage(String),
    /// Unreadable or unwritable files (exit 3).
    Io(String),
    /// Malformed or insufficient input data (exit 4).
    Data(String),
    /// Estimation or numerical failure (exit 5).
    Model(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "E_USAGE",
            CliError::Io(_) => "E_IO",
            CliError::Data(_) => "E_DATA",
            CliError::Model(_) => "E_MODEL",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Data(_) => 4,
            CliError::Model(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (CliError::Usage(m) | CliError::Io(m) | CliError::Data(m) | CliError::Model(m)) = self;
        write!(f, "{m}")
    }
}

impl std::error::Error for CliError {}

impl From<piar::Error> for CliError {
    fn from(e: piar::Error) -> Self {
        use piar::Error::*;
        let msg = e.to_string();
        match e {
            InvalidParameter(_) => CliError::Usage(msg),
            OptimizerFailed(_) | FitFailed(_) | NonStationaryCoefficients { .. }
            | SingularSystem { .. } | SingularSimilarity | CollinearLags { .. }
            | DegenerateSeeds(_) | DegenerateVariance { .. } => CliError::Model(msg),
            _ => CliError::Data(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        match e.kind() {
            csv::ErrorKind::Io(_) => CliError::Io(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
