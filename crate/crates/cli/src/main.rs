//! `qcollide`: simulate qubit collision models and inspect the derived
//! semigroups from the command line.
//!
//! Exit codes: 0 success, 1 diagnostic failure, 2 configuration error,
//! 3 non-invertible collision map.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use config::ConfigArgs;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    NonInvertible,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::NonInvertible => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Config(msg) => format!("error: {}", msg.replace('\n', " ")),
            CliError::NonInvertible => "rates diverge: non-invertible collision map".to_string(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qcollide", version, about = "Collision models of open qubit dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the discrete and continuous trajectory as CSV.
    Simulate {
        #[command(flatten)]
        config: ConfigArgs,
        /// Output path (standard output when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the decay, decoherence and rotation rates as JSON.
    Rates {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Print the Lindblad (GKS) coefficients of the generator as JSON.
    Lindblad {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Run the consistency checks and print their outcome as JSON.
    Check {
        #[command(flatten)]
        config: ConfigArgs,
        /// Halve the decoherence rate before checking (negative control).
        #[arg(long)]
        inject_gamma2_violation: bool,
    },
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Simulate { config, out } => {
            let cfg = config::resolve(&config)?;
            commands::simulate(&cfg, out.as_deref())?;
        }
        Command::Rates { config } => {
            let cfg = config::resolve(&config)?;
            print_json(&commands::rates_report(&cfg)?);
        }
        Command::Lindblad { config } => {
            let cfg = config::resolve(&config)?;
            print_json(&commands::lindblad_report(&cfg)?);
        }
        Command::Check { config, inject_gamma2_violation } => {
            let cfg = config::resolve(&config)?;
            let report = commands::check_report(&cfg, inject_gamma2_violation)?;
            for check in &report.checks {
                eprintln!("{}", commands::describe(check));
            }
            print_json(&report);
            if !report.all_passed {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = err.print();
                return ExitCode::SUCCESS;
            }
            let rendered = err.to_string();
            let line = rendered.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            eprintln!("{}", line.trim());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("{}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}
