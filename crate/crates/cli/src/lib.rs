//! Library side of the `curvelab` binary: argument types, operator loading,
//! the four commands and report emission.

pub mod args;
pub mod commands;
pub mod input;
pub mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::commands::Outcome;

/// Exit status: 0 pass, 1 verification failure, 2 input error.
pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

/// Environment variable capping the worker thread count.
pub const THREADS_VAR: &str = "CURVELAB_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] curvelab_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

pub fn run_command(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Decompose(a) => commands::cmd_decompose(a),
        Command::Kterm(a) => commands::cmd_kterm(a),
        Command::Verify(a) => commands::cmd_verify(a),
        Command::Certify(a) => commands::cmd_certify(a),
    }
}

/// Sizes the global pool from `CURVELAB_THREADS` when set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size the thread pool: {e}")))
}

/// Parses arguments, runs the command and writes its report.
pub fn main_with_args<I, T>(argv: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS });
        }
    };
    let result = configure_threads().and_then(|_| run_command(&cli.command));
    match result {
        Ok(outcome) => {
            if let Err(e) = output::emit(&outcome.report, cli.output.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_INPUT);
            }
            ExitCode::from(if outcome.passed { EXIT_PASS } else { EXIT_FAILURE })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
