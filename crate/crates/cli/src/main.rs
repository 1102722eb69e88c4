mod bound;
mod cli;
mod config;
mod ions;
mod output;
mod simulate;
mod tables;

use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use cli::{Cli, Command, Experiment};
use config::FileConfig;

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_TOLERANCE: u8 = 3;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, files or scenarios; exit code 2.
    Input(String),
    /// Failure inside the simulator; exit code 1.
    Internal(String),
}

/// Flag, then config file, then nothing.
pub fn pick<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

/// Parses a config-file string as a clap value enum.
pub fn parse_enum<T: ValueEnum>(key: &str, value: Option<&String>) -> Result<Option<T>, CliError> {
    value
        .map(|s| T::from_str(s, true).map_err(|e| CliError::Input(format!("config `{key}`: {e}"))))
        .transpose()
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let file = FileConfig::load(cli.config.as_deref())?;
    let db = || config::open_database(cli.db.as_deref(), &file, cli.lenient);
    match &cli.command {
        Command::Ions { action } => ions::run(action, &db()?),
        Command::Bound(args) => bound::run(args, &file, &db()?),
        Command::Tables(args) => tables::run(args, &file, &db()?),
        Command::Simulate {
            experiment: Experiment::Dft(args),
        } => simulate::run(args, &file),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
