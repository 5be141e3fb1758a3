use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed JSON; positions are 1-based.
    #[error("{path}:{line}:{column}: {message}")]
    Syntax { path: String, line: usize, column: usize, message: String },
    /// Well-formed JSON that does not match the schema.
    #[error("{path}: field `{field}`: {message}")]
    Schema { path: String, field: String, message: String },
    #[error("invalid {what} `{input}`: {message}")]
    Argument { what: &'static str, input: String, message: String },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] ncho_core::Error),
}

impl CliError {
    pub fn argument(what: &'static str, input: &str, message: impl Into<String>) -> Self {
        CliError::Argument { what, input: input.to_owned(), message: message.into() }
    }

    /// 2 for bad input and domain errors, 1 for I/O and numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Syntax { .. } | CliError::Schema { .. } | CliError::Argument { .. } => 2,
            CliError::Core(e) if e.is_domain() => 2,
            CliError::Core(_) | CliError::Csv(_) | CliError::Io { .. } => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
