use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use serde_json::json;
use twotasep_core::{solve_steady_state, Error};

use super::Status;
use crate::config::{load_opt, positive_rates, ModelArgs, RateArgs, SolverArgs};
use crate::output::{to_json, versioned, Outputs};

#[derive(Debug, Args)]
pub struct SteadyArgs {
    /// TOML or JSON config; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    rates: RateArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Write the steady state here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(args: &SteadyArgs) -> Result<Status> {
    let file = load_opt(args.config.as_deref())?;
    let p = args.model.resolve(&file)?;
    let rates = args.rates.resolve(&file);
    positive_rates(&rates)?;
    let cfg = args.solver.resolve(&file)?;

    let (state, status) = match solve_steady_state(&rates, &p, &cfg) {
        Ok(s) => (s, Status::Success),
        Err(Error::NonConvergence { best }) => {
            eprintln!(
                "warning: no convergence after {} iterations; best residual {:.3e}",
                best.iterations, best.residual
            );
            (*best, Status::NotConverged)
        }
        Err(e) => return Err(e.into()),
    };
    let body = to_json(&versioned(&state)?)?;
    let config = json!({ "params": p, "rates": rates, "solver": cfg });
    match &args.out {
        Some(path) => {
            let mut outputs = Outputs::new("steady", config, Vec::new());
            outputs.add(path, body);
            outputs.commit()?;
        }
        None => print!("{}", String::from_utf8_lossy(&body)),
    }
    Ok(status)
}
