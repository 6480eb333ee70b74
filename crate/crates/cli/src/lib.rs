//! Front end for `dcover-core`: expression parsing, input documents,
//! subcommands and machine-readable output.
//!
//! Exit codes: 0 on success, 1 for rejected input (including a failed
//! `validate`), 2 when the library reports a violated internal invariant.

pub mod commands;
pub mod doc;
pub mod poly;
pub mod tree;

use std::ffi::OsString;

use clap::Parser;

pub use commands::Cli;

/// Errors surfaced to the user, classified by exit code.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Core(dcover_core::Error),
    Io(String),
    /// The command ran but the result is a rejection (a failed validation).
    Rejected(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(s) | CliError::Io(s) | CliError::Rejected(s) => f.write_str(s),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<dcover_core::Error> for CliError {
    fn from(e: dcover_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_internal() => 2,
            _ => 1,
        }
    }
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the tool on `args` (including the program name) and `stdin`.
pub fn run<I, T>(args: I, stdin: &mut dyn std::io::Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            // Help and version requests are successes; every other argument
            // problem is bad input.
            let code = if e.use_stderr() { 1 } else { 0 };
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match commands::execute(&cli, stdin) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err((e, partial)) => Outcome {
            code: e.exit_code(),
            stdout: partial.unwrap_or_default(),
            stderr: format!("error: {e}\n"),
        },
    }
}
