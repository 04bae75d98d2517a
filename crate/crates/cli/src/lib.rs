//! Command-line front end for the `grigorchuk` crate.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or input error,
//! 3 a resource cap was hit.

pub mod args;
pub mod checks;
mod commands;
pub mod config;

use clap::Parser;
use thiserror::Error;

pub use args::Cli;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("resource cap: {0}")]
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Cap(_) => 3,
        }
    }
}

/// What a command prints on stdout and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    commands::run(cli)
}

/// Parse `args` (including the program name) and run. Usage errors are
/// rendered into `stdout` with code 2, like the binary does.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli).unwrap_or_else(|e| Outcome { stdout: format!("error: {e}\n"), code: e.exit_code() }),
        Err(e) => Outcome { stdout: e.to_string(), code: if e.use_stderr() { 2 } else { 0 } },
    }
}
