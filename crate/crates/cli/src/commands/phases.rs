use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Result};
use clap::{Args, ValueEnum};
use serde_json::json;
use twotasep_core::export::{write_phase_grid, write_rate_grid};
use twotasep_core::phase::DEFAULT_V_TOL;
use twotasep_core::{phase_diagram_rates, phase_diagram_z, RateAxis, RateName, RateSweep};

use super::Status;
use crate::config::{load_opt, parse_pair, positive_rates, ModelArgs, RateArgs, SolverArgs};
use crate::output::{to_json, versioned, Outputs};
use crate::svg::{phase_raster, Axis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Phases over the domain of bulk Riemann variables
    Z,
    /// Steady-state phases over two boundary rates
    Rates,
}

#[derive(Debug, Args)]
pub struct PhasesArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    /// Grid points per axis [default: 200 for z, 30 for rates]
    #[arg(long)]
    resolution: Option<usize>,
    /// Grid CSV
    #[arg(long)]
    out: PathBuf,
    /// Also draw the grid as SVG
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Velocities within this of zero count as bulk-induced (z mode)
    #[arg(long, default_value_t = DEFAULT_V_TOL)]
    v_tol: f64,
    /// Rate on the horizontal axis (rates mode), e.g. nu_star_circ_l
    #[arg(long)]
    x: Option<String>,
    #[arg(long, value_parser = parse_pair, default_value = "0.05,1")]
    x_range: (f64, f64),
    #[arg(long)]
    y: Option<String>,
    #[arg(long, value_parser = parse_pair, default_value = "0.05,1")]
    y_range: (f64, f64),
    /// TOML or JSON config for the model and the fixed rates
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    rates: RateArgs,
    #[command(flatten)]
    solver: SolverArgs,
}

fn axis(name: &Option<String>, range: (f64, f64), flag: &str) -> Result<RateAxis> {
    let name = name.as_deref().ok_or_else(|| anyhow!("rates mode needs --{flag}"))?;
    let name = RateName::parse(name).ok_or_else(|| {
        let known: Vec<_> = RateName::ALL.iter().map(|r| r.as_str()).collect();
        anyhow!("unknown rate '{name}'; expected one of {}", known.join(", "))
    })?;
    Ok(RateAxis { name, min: range.0, max: range.1 })
}

pub fn run(args: &PhasesArgs) -> Result<Status> {
    let file = load_opt(args.config.as_deref())?;
    let p = args.model.resolve(&file)?;
    let mut outputs;
    let mut csv = Vec::new();
    let summary;
    let svg;
    match args.mode {
        Mode::Z => {
            let n = args.resolution.unwrap_or(200);
            if n < 2 {
                bail!("resolution must be at least 2");
            }
            let grid = phase_diagram_z(&p, n, args.v_tol)?;
            write_phase_grid(&mut csv, &grid)?;
            let regions = grid.regions();
            let mut counts: BTreeMap<String, usize> = BTreeMap::new();
            for (phase, _) in &regions {
                *counts.entry(phase.label()).or_default() += 1;
            }
            summary = json!({
                "mode": "z",
                "resolution": n,
                "regions": regions.len(),
                "regions_by_label": counts,
                "labels": grid.distinct_labels().iter().map(|l| l.label()).collect::<Vec<_>>(),
            });
            svg = args.svg.as_ref().map(|_| {
                phase_raster(
                    &format!("Bulk phases, alpha = {}, beta = {}", p.alpha, p.beta),
                    Axis { label: "z_alpha", min: 0.0, max: p.z_alpha_max() },
                    Axis { label: "z_beta", min: 0.0, max: p.z_beta_max() },
                    n,
                    n,
                    |i, j| grid.get(i, j).map(|ph| ph.label()),
                )
            });
            outputs = Outputs::new("phases", json!({ "mode": "z", "params": p, "resolution": n, "v_tol": args.v_tol }), Vec::new());
        }
        Mode::Rates => {
            let n = args.resolution.unwrap_or(30);
            let fixed = args.rates.resolve(&file);
            positive_rates(&fixed)?;
            let sweep = RateSweep {
                x: axis(&args.x, args.x_range, "x")?,
                y: axis(&args.y, args.y_range, "y")?,
                fixed,
            };
            sweep.validate()?;
            let cfg = args.solver.resolve(&file)?;
            let grid = phase_diagram_rates(&p, &sweep, n, &cfg)?;
            write_rate_grid(&mut csv, &grid)?;
            let mut counts: BTreeMap<String, usize> = BTreeMap::new();
            for cell in grid.cells.iter().filter(|c| c.converged) {
                if let Some(s) = &cell.state {
                    *counts.entry(s.phase.label()).or_default() += 1;
                }
            }
            let converged = grid.cells.iter().filter(|c| c.converged).count();
            summary = json!({
                "mode": "rates",
                "resolution": n,
                "cells": grid.cells.len(),
                "converged": converged,
                "cells_by_label": counts,
            });
            svg = args.svg.as_ref().map(|_| {
                phase_raster(
                    &format!("Steady-state phases, alpha = {}, beta = {}", p.alpha, p.beta),
                    Axis { label: sweep.x.name.as_str(), min: sweep.x.min, max: sweep.x.max },
                    Axis { label: sweep.y.name.as_str(), min: sweep.y.min, max: sweep.y.max },
                    n,
                    n,
                    |i, j| {
                        let c = &grid.cells[j * n + i];
                        c.state.as_ref().filter(|_| c.converged).map(|s| s.phase.label())
                    },
                )
            });
            outputs = Outputs::new("phases", json!({ "mode": "rates", "params": p, "sweep": sweep, "resolution": n, "solver": cfg }), Vec::new());
        }
    }
    outputs.add(&args.out, csv);
    if let (Some(path), Some(doc)) = (&args.svg, svg) {
        outputs.add(path, doc.into_bytes());
    }
    let stdout = to_json(&versioned(&summary)?)?;
    outputs.commit()?;
    print!("{}", String::from_utf8_lossy(&stdout));
    Ok(Status::Success)
}
