use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use serde::Serialize;
use serde_json::json;
use twotasep_core::export::write_riemann_profile;
use twotasep_core::{sample_profile, solve_riemann, Densities, RiemannData, RiemannVars, Wave};

use super::Status;
use crate::config::{parse_pair, FileConfig, ModelArgs};
use crate::output::{to_json, versioned, Outputs};

#[derive(Debug, Args)]
pub struct RiemannArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Left state in Riemann variables, `z_alpha,z_beta`
    #[arg(long, value_parser = parse_pair, requires = "zr", conflicts_with_all = ["rhol", "rhor"])]
    zl: Option<(f64, f64)>,
    #[arg(long, value_parser = parse_pair, requires = "zl")]
    zr: Option<(f64, f64)>,
    /// Left state in densities, `rho_circ,rho_bullet`
    #[arg(long, value_parser = parse_pair, requires = "rhor")]
    rhol: Option<(f64, f64)>,
    #[arg(long, value_parser = parse_pair, requires = "rhol")]
    rhor: Option<(f64, f64)>,
    /// Number of profile samples
    #[arg(long, default_value_t = 201)]
    xi_samples: usize,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    xi_min: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    xi_max: f64,
    /// Profile CSV; the summary always goes to stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Summary<'a> {
    scenario: String,
    z_left: RiemannVars,
    z_right: RiemannVars,
    waves: &'a [Wave],
    constant_states: &'a [RiemannVars],
}

pub fn run(args: &RiemannArgs) -> Result<Status> {
    let p = args.model.resolve(&FileConfig::default())?;
    let data = match (args.zl, args.zr, args.rhol, args.rhor) {
        (Some(l), Some(r), None, None) => {
            RiemannData::new(RiemannVars::new(l.0, l.1).checked(&p)?, RiemannVars::new(r.0, r.1).checked(&p)?, p)
        }
        (None, None, Some(l), Some(r)) => RiemannData::from_densities(Densities::new(l.0, l.1), Densities::new(r.0, r.1), p)?,
        _ => bail!("give either --zl and --zr or --rhol and --rhor"),
    };
    if args.xi_samples < 2 || !(args.xi_min < args.xi_max) {
        bail!("need at least two samples on a non-empty xi interval");
    }
    let sol = solve_riemann(data)?;
    let summary = Summary {
        scenario: sol.scenario(),
        z_left: sol.data.z_left,
        z_right: sol.data.z_right,
        waves: &sol.waves,
        constant_states: &sol.constant_states,
    };
    let mut outputs = Outputs::new(
        "riemann",
        json!({
            "params": p,
            "z_left": sol.data.z_left,
            "z_right": sol.data.z_right,
            "xi_samples": args.xi_samples,
            "xi_min": args.xi_min,
            "xi_max": args.xi_max,
        }),
        Vec::new(),
    );
    if let Some(path) = &args.out {
        let profile = sample_profile(&sol, args.xi_min, args.xi_max, args.xi_samples)?;
        let mut csv = Vec::new();
        write_riemann_profile(&mut csv, &profile)?;
        outputs.add(path, csv);
    }
    let stdout = to_json(&versioned(&summary)?)?;
    outputs.commit()?;
    print!("{}", String::from_utf8_lossy(&stdout));
    Ok(Status::Success)
}
