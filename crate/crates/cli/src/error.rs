//! Exit-code contract: 0 success, 1 bound violation or failed verification,
//! 2 input error, 3 internal invariant failure.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// The run falsifies a checked guarantee (treated as a bug, exit 1).
    Violation(String),
    /// Bad files, flags or configuration (exit 2).
    Input(String),
    /// The implementation contradicted itself (exit 3).
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Violation(_) => 1,
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    pub fn input(msg: impl fmt::Display) -> CliError {
        CliError::Input(msg.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Violation(m) => write!(f, "{m}"),
            CliError::Input(m) => write!(f, "{m}"),
            CliError::Internal(m) => write!(f, "internal invariant failure: {m}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<treelabel::GraphError> for CliError {
    fn from(e: treelabel::GraphError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<treelabel::LabelingError> for CliError {
    fn from(e: treelabel::LabelingError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<treelabel::harness::order::OrderError> for CliError {
    fn from(e: treelabel::harness::order::OrderError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<treelabel::harness::instance::GenerateError> for CliError {
    fn from(e: treelabel::harness::instance::GenerateError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
