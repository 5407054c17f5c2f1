//! Command implementations behind the `jndbem` binary.
//!
//! Every command returns its stdout text; [`CliError`] carries the exit
//! code contract (1 for runtime/data errors, 2 for usage errors).

pub mod args;
pub mod bench;
pub mod evaluate;
mod io;
pub mod psych;
pub mod synth;

use std::fmt;

pub use args::{Cli, Command};
pub use bench::BenchReport;
pub use io::{read_mos_csv, sha256_hex};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Runtime(err) => write!(f, "error: {err:#}"),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(err: anyhow::Error) -> Self {
        CliError::Runtime(err)
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub(crate) fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialises");
    s.push('\n');
    s
}

/// Runs a parsed command line and returns what should go to stdout.
pub fn run(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Evaluate(a) => evaluate::run(&a),
        Command::Bench(a) => bench::run(&a),
        Command::Stimuli(a) => psych::stimuli(&a),
        Command::JndAnalyze(a) => psych::analyze(&a),
        Command::Synth(a) => synth::run(&a),
    }
}
