//! Command-line harness for `dynsub`: JSON matrix I/O, single-object computations and
//! the seeded verification suites.

pub mod cli;
pub mod io;
pub mod report;
pub mod suites;

use std::fmt;

/// Failure of a CLI command, mapped onto the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Malformed input: unreadable files, bad JSON, wrong shapes. Exit code 2.
    Input(String),
    /// Well-formed input that violates a mathematical contract. Exit code 1.
    Contract(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Contract(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "malformed input: {m}"),
            CliError::Contract(m) => write!(f, "contract violation: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<dynsub::Error> for CliError {
    fn from(e: dynsub::Error) -> Self {
        match e {
            dynsub::Error::Dimension(_)
            | dynsub::Error::NonFinite
            | dynsub::Error::BlockForm(_) => CliError::Input(e.to_string()),
            _ => CliError::Contract(e.to_string()),
        }
    }
}
