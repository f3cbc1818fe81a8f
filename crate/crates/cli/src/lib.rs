//! Command-line front end: argument parsing, config files, dispatch to the
//! solvers, and the acceptance suite behind `selftest`.

pub mod acceptance;
pub mod config;
pub mod run;

use clap::Parser;
use thiserror::Error;

use config::{Cli, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] gelfand_core::GelfandError),
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_validation() => EXIT_VALIDATION,
            CliError::Core(_) => EXIT_SOLVER,
            CliError::Usage(_) | CliError::Json(_) => EXIT_VALIDATION,
            CliError::Io(_) | CliError::Pool(_) => EXIT_SOLVER,
        }
    }
}

/// Parses `args` (program name first), runs, prints, and returns the exit
/// code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            };
            let _ = e.print();
            return code;
        }
    };
    let config = match RunConfig::resolve(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    match run::execute(&config) {
        Ok(outcome) => {
            if config.json {
                println!("{}", run::json_record(&config, &outcome));
            } else {
                println!("{}", outcome.text);
            }
            if outcome.success {
                EXIT_OK
            } else {
                EXIT_SOLVER
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
