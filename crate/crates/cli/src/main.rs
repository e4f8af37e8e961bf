//! Command-line front end for polynomial degree reduction.
//!
//! Exit codes: 0 success, 1 I/O or internal failure, 2 malformed input or
//! config, 3 target degree not below the input degree, 4 non-positive
//! half-width, 5 stability failure under `bench --strict`.

mod bench;
mod document;
mod error;
mod reduce;
mod sample;

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use polyreduce::bench::Method;
use polyreduce::ScalarMode;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "polyreduce", version, about = "Best L2 polynomial degree reduction on [-l, l]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reduce a polynomial document to a lower degree.
    Reduce(reduce::ReduceArgs),
    /// Tabulate a polynomial and its reduction on an equispaced grid.
    Sample(sample::SampleArgs),
    /// Run the scaling and stability experiments.
    Bench(bench::BenchArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub(crate) enum MethodArg {
    Direct,
    Classical,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Direct => Method::Direct,
            MethodArg::Classical => Method::Classical,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub(crate) enum ModeArg {
    Rational,
    Float,
}

impl From<ModeArg> for ScalarMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Rational => ScalarMode::ExactRational,
            ModeArg::Float => ScalarMode::Float64,
        }
    }
}

/// Writes to `path`, or to stdout when there is none.
pub(crate) fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(path) => fs::write(path, bytes).map_err(|source| CliError::Write {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout().lock().write_all(bytes).map_err(|source| CliError::Write {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Reduce(args) => reduce::run(args),
        Command::Sample(args) => sample::run(args),
        Command::Bench(args) => bench::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("polyreduce: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
