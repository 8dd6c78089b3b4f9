//! The `subcut` command-line tool: instance generation, exact solving,
//! classical GMI baselines and continuous cutting-plane runs.
//!
//! Exit codes: 0 success (including budget exhaustion), 1 numerical
//! failure, 2 usage or input error, 3 node limit, 4 infeasible.

pub mod args;
mod commands;
mod config;

use std::ffi::OsString;

use clap::Parser;
use subcut::LpStatus;

pub use args::Cli;
pub use config::{resolve_run_spec, RunSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERICAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NODE_LIMIT: i32 = 3;
pub const EXIT_INFEASIBLE: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] subcut::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use subcut::Error as E;
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) => match e {
                E::Parse { .. }
                | E::Validation { .. }
                | E::Io { .. }
                | E::InfeasibleParameters(_)
                | E::DimensionMismatch(_)
                | E::Explosion { .. } => EXIT_USAGE,
                E::LpNotOptimal(LpStatus::Infeasible) => EXIT_INFEASIBLE,
                _ => EXIT_NUMERICAL,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match commands::dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
