//! `eev` — ensemble eddy-viscosity shear-flow simulator.
//!
//! Subcommands: `run` a configured simulation and write its diagnostics,
//! `report` to recompute the bound report from a finished run directory,
//! `hardy-verify` for the standalone inequality suite, and `print-config`
//! to echo the resolved configuration.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure,
//! 4 I/O or malformed data.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "eev", version, about = "Ensemble eddy-viscosity shear-flow simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation and write diagnostics, bound report, checkpoints and
    /// a manifest into the output directory.
    Run {
        /// TOML configuration file.
        #[arg(long)]
        config: PathBuf,
        /// Output directory (created if absent).
        #[arg(long)]
        output: PathBuf,
        /// Suppress the stdout summary.
        #[arg(long)]
        quiet: bool,
    },
    /// Recompute and print the bound report from a run directory.
    Report {
        /// Directory produced by `eev run`.
        #[arg(long = "run-dir")]
        run_dir: PathBuf,
    },
    /// Verify the Hardy-type inequalities and closed-form constants on
    /// deterministic random test functions.
    HardyVerify {
        /// Quadrature samples per test function.
        #[arg(long, default_value_t = 2048)]
        samples: usize,
        /// Also write the result table to this CSV file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Parse a configuration (or the built-in defaults) and print the fully
    /// resolved document.
    PrintConfig {
        /// TOML configuration file; omitted means defaults.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { config, output, quiet } => commands::cmd_run(config, output, *quiet),
        Command::Report { run_dir } => commands::cmd_report(run_dir),
        Command::HardyVerify { samples, output } => {
            commands::cmd_hardy_verify(*samples, output.as_deref())
        }
        Command::PrintConfig { config } => commands::cmd_print_config(config.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
