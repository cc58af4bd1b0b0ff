//! Command-line front end for the awrlab solvers.
//!
//! Exit codes: 0 on success, 1 on a validation or I/O error, 2 when a
//! command ran but one of its verdicts failed.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_FAILED_VERDICT: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error("config file {path}: {source}", path = .0.display(), source = .1)]
    Config(PathBuf, serde_json::Error),

    #[error("{path}: {source}", path = .0.display(), source = .1)]
    Io(PathBuf, std::io::Error),

    #[error(transparent)]
    Core(#[from] awrlab_core::Error),
}

/// Parse `args` (including the program name), run the command, and return
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match config::Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let (kind, flags) = cli.command.split();
    let outcome = config::resolve(kind, flags).and_then(|cfg| commands::dispatch(&cfg));
    match outcome {
        Ok(o) if o.passed => EXIT_OK,
        Ok(_) => EXIT_FAILED_VERDICT,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}
