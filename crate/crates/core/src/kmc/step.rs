//! Riemann problems on the lattice: a ring whose two halves start at
//! different densities.
//!
//! The ring has a second interface where the halves meet again. It emits
//! its own waves, so a run is only meaningful while those stay clear of the
//! waves from the central interface.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Simulator, Site, Topology};
use crate::error::{Error, Result};
use crate::hydro::{Densities, ModelParams};
use crate::riemann::{solve_riemann, RiemannData, WaveFanSolution};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRunConfig {
    pub rho_left: Densities,
    pub rho_right: Densities,
    pub params: ModelParams,
    pub length: usize,
    pub time: f64,
    pub seed: u64,
}

impl StepRunConfig {
    fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.rho_left.checked()?;
        self.rho_right.checked()?;
        if self.length < 4 || self.length % 2 != 0 {
            return Err(Error::Config(format!("length must be even and at least 4, got {}", self.length)));
        }
        if !(self.time > 0.0 && self.time.is_finite()) {
            return Err(Error::Config(format!("time must be positive, got {}", self.time)));
        }
        Ok(())
    }

    /// Whether waves from the two interfaces can have met by `time`.
    pub fn waves_reach_edge(&self) -> Result<bool> {
        let speeds = |sol: &WaveFanSolution| -> (f64, f64) {
            match (sol.waves.first(), sol.waves.last()) {
                (Some(first), Some(last)) => (first.speed_lo.min(0.0), last.speed_hi.max(0.0)),
                _ => (0.0, 0.0),
            }
        };
        let centre = solve_riemann(RiemannData::from_densities(self.rho_left, self.rho_right, self.params)?)?;
        let seam = solve_riemann(RiemannData::from_densities(self.rho_right, self.rho_left, self.params)?)?;
        let (c_lo, c_hi) = speeds(&centre);
        let (s_lo, s_hi) = speeds(&seam);
        let half = self.length as f64 / 2.0;
        Ok((c_hi - s_lo) * self.time >= half || (s_hi - c_lo) * self.time >= half)
    }
}

/// Occupations at the final time, indexed by site. Site `i` sits at
/// `x = i - L/2 + 1/2` relative to the initial interface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepProfile {
    pub time: f64,
    pub positions: Vec<f64>,
    pub rho_circ: Vec<f64>,
    pub rho_bullet: Vec<f64>,
    pub wave_reached_edge: bool,
}

fn initial_sites(cfg: &StepRunConfig, rng: &mut ChaCha8Rng) -> Vec<Site> {
    let half = cfg.length / 2;
    (0..cfg.length)
        .map(|i| {
            let rho = if i < half { cfg.rho_left } else { cfg.rho_right };
            Site::sample(rho, rng.random())
        })
        .collect()
}

fn positions(length: usize) -> Vec<f64> {
    (0..length).map(|i| i as f64 - length as f64 / 2.0 + 0.5).collect()
}

/// One trajectory from independently sampled step initial data.
pub fn step_initial_condition_run(cfg: &StepRunConfig) -> Result<StepProfile> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sites = initial_sites(cfg, &mut rng);
    let mut sim = Simulator::from_sites(sites, cfg.params, None, Topology::Ring, rng);
    sim.advance(cfg.time);
    Ok(StepProfile {
        time: cfg.time,
        positions: positions(cfg.length),
        rho_circ: sim.sites().iter().map(|&s| (s == Site::Circ) as u8 as f64).collect(),
        rho_bullet: sim.sites().iter().map(|&s| (s == Site::Bullet) as u8 as f64).collect(),
        wave_reached_edge: cfg.waves_reach_edge()?,
    })
}

/// Replica average, optionally over several snapshots per replica.
///
/// Snapshots are taken at `time (1 + spread (k / (m - 1) - 1/2))`; each is
/// rescaled to `time` through the similarity variable, so site `x` reads the
/// snapshot at `x t_k / time`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepEnsemble {
    pub run: StepRunConfig,
    pub replicas: usize,
    pub snapshots: usize,
    pub spread: f64,
}

pub fn step_ensemble(ens: &StepEnsemble) -> Result<StepProfile> {
    let cfg = ens.run;
    cfg.validate()?;
    if ens.replicas == 0 || ens.snapshots == 0 {
        return Err(Error::Config("need at least one replica and one snapshot".into()));
    }
    if !(0.0..1.0).contains(&ens.spread) {
        return Err(Error::Config(format!("spread must lie in [0, 1), got {}", ens.spread)));
    }
    let l = cfg.length;
    let xs = positions(l);
    let times: Vec<f64> = (0..ens.snapshots)
        .map(|k| {
            let frac = if ens.snapshots == 1 { 0.5 } else { k as f64 / (ens.snapshots - 1) as f64 };
            cfg.time * (1.0 + ens.spread * (frac - 0.5))
        })
        .collect();

    let sums = (0..ens.replicas)
        .into_par_iter()
        .map(|r| {
            let seed = cfg.seed.wrapping_add(r as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sites = initial_sites(&cfg, &mut rng);
            let mut sim = Simulator::from_sites(sites, cfg.params, None, Topology::Ring, rng);
            let mut circ = vec![0.0; l];
            let mut bullet = vec![0.0; l];
            for &t_k in &times {
                sim.advance(t_k);
                let scale = t_k / cfg.time;
                for (i, x) in xs.iter().enumerate() {
                    let site = (x * scale + l as f64 / 2.0 - 0.5).round().rem_euclid(l as f64) as usize;
                    match sim.sites()[site] {
                        Site::Circ => circ[i] += 1.0,
                        Site::Bullet => bullet[i] += 1.0,
                        Site::Star => {}
                    }
                }
            }
            (circ, bullet)
        })
        .reduce(
            || (vec![0.0; l], vec![0.0; l]),
            |(mut c, mut b), (c2, b2)| {
                c.iter_mut().zip(c2).for_each(|(x, y)| *x += y);
                b.iter_mut().zip(b2).for_each(|(x, y)| *x += y);
                (c, b)
            },
        );
    let norm = (ens.replicas * ens.snapshots) as f64;
    let mut edge_cfg = cfg;
    edge_cfg.time = times.last().copied().unwrap_or(cfg.time);
    Ok(StepProfile {
        time: cfg.time,
        positions: xs,
        rho_circ: sums.0.into_iter().map(|v| v / norm).collect(),
        rho_bullet: sums.1.into_iter().map(|v| v / norm).collect(),
        wave_reached_edge: edge_cfg.waves_reach_edge()?,
    })
}
