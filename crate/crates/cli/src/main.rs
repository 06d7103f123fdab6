//! `twotasep`: Riemann solutions, steady states, phase diagrams and
//! simulations of the two-species TASEP from the command line.
//!
//! Exit codes: 0 success, 1 failed validation, 2 bad input or unusable
//! output path, 3 steady state not converged (best iterate still written).

mod commands;
mod config;
mod output;
mod svg;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{phases, riemann, simulate, steady, validate, Status};

#[derive(Debug, Parser)]
#[command(name = "twotasep", version, about = "Hydrodynamics of the two-species TASEP")]
struct Cli {
    /// Worker threads for grids and replicas; results do not depend on it
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a Riemann problem and sample its profile
    Riemann(riemann::RiemannArgs),
    /// Open-boundary steady state
    Steady(steady::SteadyArgs),
    /// Phase diagram over bulk Riemann variables or boundary rates
    Phases(phases::PhasesArgs),
    /// Kinetic Monte Carlo on a ring or an open lattice
    Simulate(simulate::SimulateArgs),
    /// Run an acceptance suite and print a pass/fail table
    Validate(validate::ValidateArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Riemann(a) => riemann::run(a),
        Command::Steady(a) => steady::run(a),
        Command::Phases(a) => phases::run(a),
        Command::Simulate(a) => simulate::run(a),
        Command::Validate(a) => validate::run(a),
    };
    match result {
        Ok(Status::Success) => ExitCode::SUCCESS,
        Ok(Status::ChecksFailed) => ExitCode::from(1),
        Ok(Status::NotConverged) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
