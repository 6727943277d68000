//! Command-line front end: simulation, estimation, forecasting, diagnostics
//! and replicated experiments for periodic autoregressive models.

mod commands;
mod config;
mod data;
mod error;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::FileConfig;
use error::Result;

#[derive(Debug, Parser)]
#[command(
    name = "piar",
    version,
    about = "Periodic and periodically integrated autoregressive modelling",
    long_about = "Simulate, fit, forecast and diagnose periodic autoregressions, \
                  including periodically integrated models whose unit roots are \
                  parametrized through seed-vectors of the year-transition matrix."
)]
struct Cli {
    /// TOML configuration file; command-line flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate a series and write it as CSV
    Simulate(commands::simulate::SimulateArgs),
    /// Fit a model and write the parameter table
    Fit(commands::fit::FitArgs),
    /// Fit a model and produce year-ahead forecasts
    Forecast(commands::forecast::ForecastArgs),
    /// Residual diagnostics and the unit-root test
    Diagnose(commands::diagnose::DiagnoseArgs),
    /// Replicated simulate-and-estimate experiment
    #[command(name = "mc-experiment")]
    McExperiment(commands::mc::McArgs),
}

fn run(cli: Cli) -> Result<()> {
    let file = FileConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Simulate(args) => commands::simulate::run(args, &file),
        Command::Fit(args) => commands::fit::run(args, &file),
        Command::Forecast(args) => commands::forecast::run(args, &file),
        Command::Diagnose(args) => commands::diagnose::run(args, &file),
        Command::McExperiment(args) => commands::mc::run(args, &file),
    }
}

fn main() -> ExitCode {
    // PIAR_THREADS overrides the worker count for replicated experiments.
    if let Ok(threads) = std::env::var("PIAR_THREADS") {
        if let Ok(threads) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
