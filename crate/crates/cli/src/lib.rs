//! Command-line driver for `qpf-rdm`.
//!
//! Every command renders its whole output in memory and reports an exit
//! code; [`run`] handles parsing, the worker pool and where bytes go.

pub mod args;
mod commands;
pub mod format;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

pub use args::Cli;
use args::Command;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_NOT_FOUND: i32 = 3;

/// Overrides the worker count of parallel sweeps.
pub const THREADS_ENV: &str = "QPF_RDM_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qpf_rdm::Error),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// Rendered output of a command and the exit code it asks for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub bytes: Vec<u8>,
    pub code: i32,
}

pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Simulate(a) => commands::simulate(a),
        Command::Pattern(a) => commands::pattern(a),
        Command::FindPeriod(a) => commands::find(a),
        Command::Accuracy(a) => commands::accuracy(a),
    }
}

fn out_path(command: &Command) -> Option<&PathBuf> {
    match command {
        Command::Simulate(a) => a.output.out.as_ref(),
        Command::Pattern(a) => a.output.out.as_ref(),
        Command::FindPeriod(a) => a.output.out.as_ref(),
        Command::Accuracy(a) => a.output.out.as_ref(),
    }
}

fn worker_count() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k > 0 => Ok(k),
            _ => Err(CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        },
    }
}

fn run_command(command: &Command, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count()?)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let outcome = pool.install(|| execute(command))?;
    match out_path(command) {
        Some(path) => std::fs::write(path, &outcome.bytes).map_err(|source| CliError::Io { path: path.clone(), source })?,
        None => stdout
            .write_all(&outcome.bytes)
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source })?,
    }
    Ok(outcome.code)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = write!(stderr, "{}", e.render());
            return EXIT_USAGE;
        }
        Err(e) => {
            let _ = write!(stdout, "{}", e.render());
            return EXIT_OK;
        }
    };
    match run_command(&cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}
