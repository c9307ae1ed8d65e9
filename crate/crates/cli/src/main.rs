//! Command-line front end: single computations, identity verifications and parameter sweeps.

mod compute;
mod output;
mod params;
mod sweep;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use compute::ComputeTarget;
use params::Params;
use sweep::{SweepConfig, SweepOptions};
use verify::{VerifyOptions, VerifyTarget};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Library(#[from] hdrel::Error),
    #[error(transparent)]
    Arith(#[from] hdrel::ArithError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Parser, Debug)]
#[command(name = "hdrel", version, about = "Exact Gauss sums, epsilon factors and their product relations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print one exact value
    Compute {
        #[arg(value_enum)]
        target: ComputeTarget,
        #[command(flatten)]
        params: Params,
        /// Also print a complex approximation
        #[arg(long)]
        numeric: bool,
    },
    /// Check one identity and print its reports
    Verify {
        #[arg(value_enum)]
        target: VerifyTarget,
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        options: VerifyOptions,
    },
    /// Run every cell of a TOML sweep configuration
    Sweep {
        config: PathBuf,
        #[command(flatten)]
        options: SweepOptions,
    },
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = match cli.command {
        Command::Compute { target, params, numeric } => compute::run(target, &params, numeric, &mut out)?,
        Command::Verify { target, params, options } => verify::run(target, &params, &options, &mut out)?,
        Command::Sweep { config, options } => {
            let config = SweepConfig::load(&config)?;
            sweep::run(&config, &options, &mut out, &mut std::io::stderr())?
        }
    };
    out.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("hdrel: {e}");
            ExitCode::from(2)
        }
    }
}
