use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Run(#[from] boostwave::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

/// Wave-packets under Lorentz boosts, with simulated tomography.
#[derive(Parser)]
#[command(name = "boostwave", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
pub struct Common {
    /// JSON run configuration; replaces the built-in defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the seed in the configuration (tomo and verify).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory, created if absent.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Print nothing on success.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate ψ over a space-time lattice.
    Packet,
    /// Tabulate the boosted wave-function and report the normalization constants.
    Boost,
    /// Simulate a counts table and reconstruct densities on simultaneity slices.
    Tomo,
    /// Run the invariance suite.
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Packet => commands::packet(&cli.common),
        Command::Boost => commands::boost(&cli.common),
        Command::Tomo => commands::tomo(&cli.common),
        Command::Verify => commands::verify(&cli.common),
    };
    match result {
        Ok(outcome) => {
            if !cli.common.quiet {
                if let Some(s) = &outcome.summary {
                    print!("{s}");
                }
                for f in &outcome.files {
                    println!("wrote {}", f.display());
                }
            }
            if outcome.failed_checks.is_empty() {
                ExitCode::SUCCESS
            } else {
                eprintln!("failed checks: {}", outcome.failed_checks.join(", "));
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("boostwave: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
