//! Error types shared by the whole crate.

use thiserror::Error;

/// Coarse error classes, mirrored in the CLI exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad arguments, malformed configuration, inadmissible potentials.
    Input,
    /// A solver failed: missing bracket, degenerate derivative, inconsistency.
    Numerical,
    /// An enumeration would exceed the configured cylinder budget.
    Resource,
}

impl ErrorClass {
    /// Process exit code used by the CLI for this class.
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Input => 2,
            ErrorClass::Numerical => 3,
            ErrorClass::Resource => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ErrorClass::Input => "input",
            ErrorClass::Numerical => "numerical",
            ErrorClass::Resource => "resource",
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("input: {0}")]
    Input(String),
    #[error("numerical: {0}")]
    Numerical(String),
    #[error("resource: {0}")]
    Resource(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Input(_) => ErrorClass::Input,
            Error::Numerical(_) => ErrorClass::Numerical,
            Error::Resource(_) => ErrorClass::Resource,
        }
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
