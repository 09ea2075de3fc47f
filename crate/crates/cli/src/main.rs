//! Command-line workbench for noisy-quantum-channel estimation.
//!
//! Subcommands: `sweep` (mean-error curves over a parameter grid),
//! `compare-pauli` (separable-vs-entangled gap surfaces), `simulate`
//! (finite-run protocol simulation), `validate` (cross-route identity
//! checks).
//!
//! Exit codes: 0 success, 1 validation or runtime failure, 2 usage error.

mod compare;
mod config;
mod manifest;
mod output;
mod simulate;
mod sweep;
mod validate;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "chanest",
    version,
    about = "Estimation of noisy quantum channels with finite resources"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit mean-error curves over a channel-parameter grid for several N.
    Sweep(sweep::SweepArgs),
    /// Tabulate the separable-minus-entangled Pauli error gap over
    /// (lambda1, lambda3).
    ComparePauli(compare::CompareArgs),
    /// Simulate finite estimation runs and report counts, estimates and
    /// costs.
    Simulate(simulate::SimulateArgs),
    /// Run the cross-route identity checks; exit 0 iff all pass.
    Validate(validate::ValidateArgs),
}

/// Errors carrying their process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config, or parameter ranges: exit 2.
    Usage(String),
    /// Failures while running: exit 1.
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => m,
        }
    }
}

impl From<chanest::Error> for CliError {
    fn from(e: chanest::Error) -> Self {
        match e {
            chanest::Error::InvalidConfig(_)
            | chanest::Error::FamilyMismatch { .. }
            | chanest::Error::UnsupportedMethod(_)
            | chanest::Error::EnumerationTooLarge(_) => CliError::Usage(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(args) => sweep::run(args),
        Command::ComparePauli(args) => compare::run(args),
        Command::Simulate(args) => simulate::run(args),
        Command::Validate(args) => validate::run(args),
    };
    match result {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.exit_code());
        }
    }
}
