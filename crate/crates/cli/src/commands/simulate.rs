use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, ValueEnum};
use serde_json::json;
use twotasep_core::export::write_site_profile;
use twotasep_core::{run as simulate, Densities, InitialFill, SimConfig, Topology};

use super::Status;
use crate::config::{load_opt, parse_pair, ModelArgs, RateArgs};
use crate::output::{to_json, versioned, Outputs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TopologyArg {
    Ring,
    Open,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// TOML or JSON config; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    topology: Option<TopologyArg>,
    /// Number of sites [default: 200]
    #[arg(long)]
    length: Option<usize>,
    /// Initial ring densities `rho_circ,rho_bullet` [default: 0.3,0.4]
    #[arg(long, value_parser = parse_pair)]
    rho: Option<(f64, f64)>,
    /// Relaxation time before measuring [default: 10 L]
    #[arg(long)]
    t_burn: Option<f64>,
    /// Measurement time [default: 100 L]
    #[arg(long)]
    t_measure: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Blocks for the error bars [default: 20]
    #[arg(long)]
    blocks: Option<usize>,
    #[command(flatten)]
    model: ModelArgs,
    /// Reservoir rates (open lattice only)
    #[command(flatten)]
    rates: RateArgs,
    /// Measurement JSON instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Time-averaged site profile CSV
    #[arg(long)]
    profile: Option<PathBuf>,
}

pub fn run(args: &SimulateArgs) -> Result<Status> {
    let file = load_opt(args.config.as_deref())?;
    let sim = &file.simulation;
    let p = args.model.resolve(&file)?;
    let topology = match args.topology {
        Some(TopologyArg::Ring) => Topology::Ring,
        Some(TopologyArg::Open) => Topology::Open,
        None => sim.topology.unwrap_or(Topology::Ring),
    };
    let length = args.length.or(sim.length).unwrap_or(200);
    let seed = args.seed.or(sim.seed).unwrap_or(1);
    let mut cfg = match topology {
        Topology::Ring => {
            let (c, b) = args.rho.unwrap_or((sim.rho_circ.unwrap_or(0.3), sim.rho_bullet.unwrap_or(0.4)));
            SimConfig::ring(length, p, Densities::new(c, b), seed)
        }
        Topology::Open => {
            let mut cfg = SimConfig::open(length, p, args.rates.resolve(&file), seed);
            if let Some((c, b)) = args.rho.or(sim.rho_circ.zip(sim.rho_bullet)) {
                cfg.initial_fill = InitialFill::Uniform(Densities::new(c, b));
            }
            cfg
        }
    };
    if let Some(t) = args.t_burn.or(sim.t_burn) {
        cfg.t_burn = t;
    }
    if let Some(t) = args.t_measure.or(sim.t_measure) {
        cfg.t_measure = t;
    }
    if let Some(b) = args.blocks.or(sim.blocks) {
        cfg.blocks = b;
    }
    let m = simulate(&cfg)?;

    let body = to_json(&versioned(&m)?)?;
    let mut outputs = Outputs::new("simulate", json!(cfg), vec![seed]);
    if let Some(path) = &args.profile {
        let mut csv = Vec::new();
        write_site_profile(&mut csv, &m)?;
        outputs.add(path, csv);
    }
    match &args.out {
        Some(path) => outputs.add(path, body),
        None => print!("{}", String::from_utf8_lossy(&body)),
    }
    outputs.commit()?;
    Ok(Status::Success)
}
