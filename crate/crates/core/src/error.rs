//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by the CLI to choose an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// Bad configuration: unknown keys, invalid values, missing paths.
    Config,
    /// Bad or inconsistent input data, including unreadable files.
    Data,
    /// Numerical failure: shape mismatches, divergence, singular systems.
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch in {op}: {details}")]
    Shape { op: &'static str, details: String },

    #[error("domain error in {op}: {details}")]
    Domain { op: &'static str, details: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("parse error at {path}:{line}: {details}")]
    Parse {
        path: String,
        line: u64,
        details: String,
    },

    #[error("data error: {0}")]
    Data(String),

    #[error("unsupported model file version: expected {expected:?}, found {found:?}")]
    ModelVersion { expected: String, found: String },

    #[error("truncated model file: {0}")]
    ModelTruncated(String),

    #[error("bad model file block: expected {expected:?}, found {found:?}")]
    ModelBlock { expected: String, found: String },

    #[error("training diverged at epoch {epoch}, batch {batch}: non-finite loss")]
    Diverged { epoch: usize, batch: usize },

    #[error("fit did not converge after {iterations} iterations: {details}")]
    NonConvergence { iterations: usize, details: String },

    #[error("design error: {0}")]
    Design(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn shape(op: &'static str, details: impl Into<String>) -> Self {
        Error::Shape {
            op,
            details: details.into(),
        }
    }

    pub fn domain(op: &'static str, details: impl Into<String>) -> Self {
        Error::Domain {
            op,
            details: details.into(),
        }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Config(_) => ErrorCategory::Config,
            Error::Parse { .. }
            | Error::Data(_)
            | Error::Io { .. }
            | Error::ModelVersion { .. }
            | Error::ModelTruncated(_)
            | Error::ModelBlock { .. } => ErrorCategory::Data,
            Error::Shape { .. }
            | Error::Domain { .. }
            | Error::Diverged { .. }
            | Error::NonConvergence { .. }
            | Error::Design(_) => ErrorCategory::Numerical,
        }
    }
}
