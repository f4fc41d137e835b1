//! Command-line harness for the treelabel prediction engine.
//!
//! Exit codes: 0 success; 1 mistake-bound violation or failed verification;
//! 2 input error; 3 internal invariant failure.

mod calibrate;
mod config;
mod error;
mod gen;
mod parse;
mod run;
mod sweep;
mod verify;

use clap::{Parser, Subcommand};

use crate::error::CliError;

#[derive(Parser)]
#[command(
    name = "treelabel",
    version,
    about = "Online graph label prediction by low-congestion routing on spanning trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph file and labels file from an instance spec
    Gen(gen::GenArgs),
    /// Run one prediction experiment and check the mistake bound
    Run(run::RunArgs),
    /// Run a grid of experiments and write one CSV row per run
    Sweep(sweep::SweepArgs),
    /// Independently re-verify the artifacts of a prior run
    Verify(verify::VerifyArgs),
    /// Measure the congestion constant and write the calibration file
    Calibrate(calibrate::CalibrateArgs),
}

fn main() {
    let cli = Cli::parse();
    let result: Result<(), CliError> = match &cli.command {
        Command::Gen(args) => gen::run(args),
        Command::Run(args) => run::run(args),
        Command::Sweep(args) => sweep::run(args),
        Command::Verify(args) => verify::run(args),
        Command::Calibrate(args) => calibrate::run(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
