use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use invariants_core::{Error, ErrorFamily};
use thiserror::Error as ThisError;

mod commands;
mod job;
mod render;

use job::Job;
use render::{render, Format};

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] Error),
    #[error("at `{0}`: {1}")]
    Field(String, Error),
    #[error("configuration: {0}")]
    Config(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) | CliError::Field(_, e) => match e.family() {
                ErrorFamily::Validation => 1,
                ErrorFamily::Truncation => 2,
                ErrorFamily::Internal => 3,
            },
            CliError::Config(_) => 1,
        }
    }
}

/// Exact Donaldson series, Seiberg-Witten basic classes and moduli bounds.
#[derive(Debug, Parser)]
#[command(name = "invariants", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Job description (JSON)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,
    /// Also run the cross-representation checks and report PASS/FAIL
    #[arg(long, global = true)]
    check: bool,
    /// Append decimal approximations with N places (marked with ~)
    #[arg(long, global = true, value_name = "N")]
    decimal: Option<usize>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Seiberg-Witten basic classes with sw and km multiplicities
    Sw,
    /// Structured Donaldson series (JSON export) and its expansion
    Series,
    /// Evaluate the Donaldson polynomial q_{L,k}
    Evaluate,
    /// Existence bound for semistable bundles and the wall check
    Bounds,
    /// Generic rank of the two-form and its nonvanishing certificate
    Tau,
    /// Blow-up transform of the closed-form series
    Blowup,
}

fn run(cli: &Cli) -> Result<(String, bool), CliError> {
    let path = cli.config.as_ref().ok_or_else(|| CliError::Config("--config <job.json> is required".into()))?;
    let job = Job::load(path)?;
    let output = match cli.command {
        Command::Sw => commands::sw(&job, cli.check)?,
        Command::Series => commands::series(&job, cli.check)?,
        Command::Evaluate => commands::evaluate(&job, cli.check)?,
        Command::Bounds => commands::bounds(&job, cli.check)?,
        Command::Tau => commands::tau(&job, cli.check)?,
        Command::Blowup => commands::blowup(&job, cli.check)?,
    };
    let passed = output.checks.iter().all(|c| c.passed);
    Ok((render(&output, cli.format, cli.decimal), passed))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((text, passed)) => {
            print!("{text}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
