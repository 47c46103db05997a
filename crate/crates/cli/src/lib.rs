//! Parser, input readers and subcommand logic behind the `qcurv` binary.

pub mod checks;
pub mod commands;
pub mod input;
pub mod parser;

use thiserror::Error;

pub use parser::{parse_expr, parse_scalar, ParseError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Core(#[from] qcurv_core::Error),
    #[error("input: {0}")]
    Input(String),
    #[error("usage: {0}")]
    Usage(String),
}

impl CliError {
    /// Input, parse and argument problems are all usage errors.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
