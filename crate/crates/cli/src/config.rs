//! Config files and the flags that override them.
//!
//! One file layout serves every command; each reads the sections it needs.
//!
//! ```toml
//! alpha = 0.8
//! beta = 0.9
//!
//! [rates]
//! uniform = 0.5
//! nu_star_circ_l = 0.3
//!
//! [solver]
//! damping = 0.5
//! tolerance = 1e-10
//! max_iterations = 100000
//!
//! [simulation]
//! topology = "open"
//! length = 500
//! seed = 7
//! ```

use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};
use twotasep_core::{BoundaryRates, ModelParams, SolverConfig, Topology};

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub rates: RatesSection,
    pub solver: SolverSection,
    pub simulation: SimulationSection,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RatesSection {
    pub uniform: Option<f64>,
    pub nu_bullet_star_l: Option<f64>,
    pub nu_star_circ_l: Option<f64>,
    pub nu_bullet_circ_l: Option<f64>,
    pub nu_bullet_star_r: Option<f64>,
    pub nu_star_circ_r: Option<f64>,
    pub nu_bullet_circ_r: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    pub damping: Option<f64>,
    pub tolerance: Option<f64>,
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationSection {
    pub topology: Option<Topology>,
    pub length: Option<usize>,
    pub t_burn: Option<f64>,
    pub t_measure: Option<f64>,
    pub seed: Option<u64>,
    pub blocks: Option<usize>,
    pub rho_circ: Option<f64>,
    pub rho_bullet: Option<f64>,
}

/// JSON when the extension says so, TOML otherwise.
pub fn load(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let parsed = if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&text).map_err(anyhow::Error::from)
    } else {
        toml::from_str(&text).map_err(anyhow::Error::from)
    };
    parsed.with_context(|| format!("invalid config {}", path.display()))
}

pub fn load_opt(path: Option<&Path>) -> Result<FileConfig> {
    path.map_or_else(|| Ok(FileConfig::default()), load)
}

/// `"0.3,0.4"` as a pair.
pub fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b] = parts.as_slice() else {
        return Err(format!("expected two comma-separated numbers, got '{s}'"));
    };
    let num = |x: &str| x.parse::<f64>().map_err(|e| format!("'{x}': {e}"));
    Ok((num(a)?, num(b)?))
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Rate of the move ∗◦ → ◦∗ [default: 0.8]
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Rate of the move •∗ → ∗• [default: 0.9]
    #[arg(long)]
    pub beta: Option<f64>,
}

impl ModelArgs {
    pub fn resolve(&self, file: &FileConfig) -> Result<ModelParams> {
        let alpha = self.alpha.or(file.alpha).unwrap_or(0.8);
        let beta = self.beta.or(file.beta).unwrap_or(0.9);
        Ok(ModelParams::new(alpha, beta)?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct RateArgs {
    /// Value for every reservoir rate not given separately [default: 0.5]
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub nu_bullet_star_l: Option<f64>,
    #[arg(long)]
    pub nu_star_circ_l: Option<f64>,
    #[arg(long)]
    pub nu_bullet_circ_l: Option<f64>,
    #[arg(long)]
    pub nu_bullet_star_r: Option<f64>,
    #[arg(long)]
    pub nu_star_circ_r: Option<f64>,
    #[arg(long)]
    pub nu_bullet_circ_r: Option<f64>,
}

impl RateArgs {
    pub fn resolve(&self, file: &FileConfig) -> BoundaryRates {
        let f = &file.rates;
        let base = self.nu.or(f.uniform).unwrap_or(0.5);
        let pick = |flag: Option<f64>, from_file: Option<f64>| flag.or(from_file).unwrap_or(base);
        BoundaryRates {
            nu_bullet_star_l: pick(self.nu_bullet_star_l, f.nu_bullet_star_l),
            nu_star_circ_l: pick(self.nu_star_circ_l, f.nu_star_circ_l),
            nu_bullet_circ_l: pick(self.nu_bullet_circ_l, f.nu_bullet_circ_l),
            nu_bullet_star_r: pick(self.nu_bullet_star_r, f.nu_bullet_star_r),
            nu_star_circ_r: pick(self.nu_star_circ_r, f.nu_star_circ_r),
            nu_bullet_circ_r: pick(self.nu_bullet_circ_r, f.nu_bullet_circ_r),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Damping of the fixed-point update, in (0, 1] [default: 0.5]
    #[arg(long)]
    pub damping: Option<f64>,
    /// Current residual at which the iteration stops [default: 1e-10]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Iteration budget [default: 100000]
    #[arg(long)]
    pub max_iter: Option<usize>,
}

impl SolverArgs {
    pub fn resolve(&self, file: &FileConfig) -> Result<SolverConfig> {
        let d = SolverConfig::default();
        let s = &file.solver;
        let cfg = SolverConfig {
            damping: self.damping.or(s.damping).unwrap_or(d.damping),
            tolerance: self.tol.or(s.tolerance).unwrap_or(d.tolerance),
            max_iterations: self.max_iter.or(s.max_iterations).unwrap_or(d.max_iterations),
            initial_guess: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn positive_rates(rates: &BoundaryRates) -> Result<()> {
    for (name, v) in BoundaryRates::NAMES.iter().zip(rates.as_array()) {
        if !(v > 0.0 && v.is_finite()) {
            bail!("{name} must be positive, got {v}");
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_parse() {
        assert_eq!(parse_pair("0.3, 0.4"), Ok((0.3, 0.4)));
        assert!(parse_pair("0.3").is_err());
        assert!(parse_pair("a,b").is_err());
    }

    #[test]
    fn toml_sections_fill_in() {
        let cfg: FileConfig = toml::from_str("alpha = 1.5\n[rates]\nuniform = 0.2\nnu_star_circ_r = 0.7\n").unwrap();
        let empty = RateArgs {
            nu: None,
            nu_bullet_star_l: None,
            nu_star_circ_l: None,
            nu_bullet_circ_l: None,
            nu_bullet_star_r: None,
            nu_star_circ_r: None,
            nu_bullet_circ_r: Some(0.9),
        };
        let r = empty.resolve(&cfg);
        assert_eq!(r.nu_bullet_star_l, 0.2);
        assert_eq!(r.nu_star_circ_r, 0.7);
        assert_eq!(r.nu_bullet_circ_r, 0.9);
        assert_eq!(cfg.alpha, Some(1.5));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<FileConfig>("gamma = 1.0").is_err());
    }
}
