mod commands;
mod config;
mod error;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use config::{RunConfig, Settings};
use error::CliError;
use std::process::ExitCode;

/// Borel-plane Picard solver for third-order nonlinear PDEs.
#[derive(Debug, Parser)]
#[command(name = "borel-pde", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one problem and write the Borel and physical solutions with a manifest.
    Solve(Settings),
    /// Sweep the ball and contraction conditions over T and nu.
    Certify(Settings),
    /// Solve, then check PDE residuals and agreement with similarity profiles.
    Validate(Settings),
    /// Run the seeded norm-inequality suite.
    Norms(Settings),
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Solve(s) => commands::solve(&RunConfig::resolve(s)?),
        Command::Certify(s) => commands::certify(&RunConfig::resolve(s)?),
        Command::Validate(s) => commands::validate(&RunConfig::resolve(s)?),
        Command::Norms(s) => commands::norms(&RunConfig::resolve(s)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
