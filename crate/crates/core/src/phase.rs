//! Phase labels and phase diagrams.
//!
//! Each Riemann variable of the bulk is left induced, right induced or bulk
//! induced according to the sign of its characteristic velocity: positive
//! velocities carry information in from the left reservoir, negative ones
//! from the right. Because `v_alpha <= v_beta`, only five pairs occur. The
//! single point where both velocities vanish sits on the diagonal at
//! `z = (1/2, 1/2)`; it gets the extra degenerate label `BB`.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::{solve_steady_state, BoundaryRates, SolverConfig, SteadyState};
use crate::error::{Error, Result};
use crate::hydro::{char_velocities, in_physical_domain, ModelParams, RiemannVars, DOMAIN_TOL};

pub const DEFAULT_V_TOL: f64 = 1e-6;

/// `BB` is accepted this close to the diagonal.
const DEGENERATE_DIAGONAL_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Induction {
    LeftInduced,
    RightInduced,
    BulkInduced,
}

impl Induction {
    pub fn from_velocity(v: f64, v_tol: f64) -> Self {
        if v > v_tol {
            Self::LeftInduced
        } else if v < -v_tol {
            Self::RightInduced
        } else {
            Self::BulkInduced
        }
    }

    pub fn letter(self) -> char {
        match self {
            Self::LeftInduced => 'L',
            Self::RightInduced => 'R',
            Self::BulkInduced => 'B',
        }
    }

    pub fn sign(self) -> char {
        match self {
            Self::LeftInduced => '+',
            Self::RightInduced => '-',
            Self::BulkInduced => '0',
        }
    }

    /// Left and right trade places under reflection.
    pub fn mirrored(self) -> Self {
        match self {
            Self::LeftInduced => Self::RightInduced,
            Self::RightInduced => Self::LeftInduced,
            Self::BulkInduced => Self::BulkInduced,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Phase {
    pub induction_alpha: Induction,
    pub induction_beta: Induction,
}

impl Phase {
    pub const fn new(induction_alpha: Induction, induction_beta: Induction) -> Self {
        Self {
            induction_alpha,
            induction_beta,
        }
    }

    /// The five phases, in the order used for legends.
    pub const ALLOWED: [Phase; 5] = {
        use Induction::*;
        [
            Phase::new(LeftInduced, LeftInduced),
            Phase::new(RightInduced, LeftInduced),
            Phase::new(RightInduced, RightInduced),
            Phase::new(BulkInduced, LeftInduced),
            Phase::new(RightInduced, BulkInduced),
        ]
    };

    pub const DEGENERATE: Phase = Phase::new(Induction::BulkInduced, Induction::BulkInduced);

    pub fn is_allowed(&self) -> bool {
        Self::ALLOWED.contains(self)
    }

    pub fn is_degenerate(&self) -> bool {
        *self == Self::DEGENERATE
    }

    /// Two-letter label such as `"RL"`.
    pub fn label(&self) -> String {
        format!("{}{}", self.induction_alpha.letter(), self.induction_beta.letter())
    }

    /// Velocity signs such as `"-+"`.
    pub fn signs(&self) -> String {
        format!("{}{}", self.induction_alpha.sign(), self.induction_beta.sign())
    }

    pub fn from_label(label: &str) -> Option<Self> {
        let parse = |c: char| match c {
            'L' => Some(Induction::LeftInduced),
            'R' => Some(Induction::RightInduced),
            'B' => Some(Induction::BulkInduced),
            _ => None,
        };
        let mut chars = label.chars();
        let (a, b) = (chars.next()?, chars.next()?);
        if chars.next().is_some() {
            return None;
        }
        Some(Self::new(parse(a)?, parse(b)?))
    }

    /// Phase of the mirror system. The alpha label of the image comes from
    /// the beta velocity of the original, with the sign reversed.
    pub fn dual(&self) -> Self {
        Self::new(self.induction_beta.mirrored(), self.induction_alpha.mirrored())
    }
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

fn check_allowed(phase: Phase, z: RiemannVars) -> Result<Phase> {
    if phase.is_allowed() || (phase.is_degenerate() && z.on_diagonal(DEGENERATE_DIAGONAL_TOL)) {
        Ok(phase)
    } else {
        Err(Error::Classification(format!(
            "{} at z = ({}, {})",
            phase.label(),
            z.z_alpha,
            z.z_beta
        )))
    }
}

/// Phase of a bulk state from the signs of its characteristic velocities.
pub fn classify_phase(z_bulk: RiemannVars, p: &ModelParams, v_tol: f64) -> Result<Phase> {
    let z = z_bulk.checked(p)?;
    let (v_alpha, v_beta) = if z.on_diagonal(DOMAIN_TOL) {
        let v = 2.0 * z.z_alpha - 1.0;
        (v, v)
    } else {
        let v = char_velocities(z, p)?;
        (v.v_alpha, v.v_beta)
    };
    let phase = Phase::new(
        Induction::from_velocity(v_alpha, v_tol),
        Induction::from_velocity(v_beta, v_tol),
    );
    check_allowed(phase, z)
}

/// Phase labels on the node grid `z_alpha = a_max i / (n - 1)`,
/// `z_beta = b_max j / (n - 1)`, stored row-major with `j` as the row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    pub params: ModelParams,
    pub resolution: usize,
    pub z_alpha: Vec<f64>,
    pub z_beta: Vec<f64>,
    /// `None` outside the physical domain or where the velocities could not
    /// be evaluated.
    pub cells: Vec<Option<Phase>>,
    pub v_alpha: Vec<f64>,
    pub v_beta: Vec<f64>,
}

impl PhaseGrid {
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.resolution + i
    }

    pub fn get(&self, i: usize, j: usize) -> Option<Phase> {
        self.cells[self.index(i, j)]
    }

    pub fn distinct_labels(&self) -> Vec<Phase> {
        let mut seen: Vec<Phase> = Vec::new();
        for p in self.cells.iter().flatten() {
            if !seen.contains(p) {
                seen.push(*p);
            }
        }
        seen
    }

    /// 8-connected regions of equal label, degenerate cells excluded.
    ///
    /// Diagonal steps matter at the tip where the `RL` wedge pinches off
    /// between the two bulk-induced bands.
    pub fn regions(&self) -> Vec<(Phase, usize)> {
        let n = self.resolution as i64;
        let mut seen = vec![false; self.cells.len()];
        let mut out = Vec::new();
        for start in 0..self.cells.len() {
            let Some(label) = self.cells[start] else { continue };
            if seen[start] || label.is_degenerate() {
                continue;
            }
            seen[start] = true;
            let mut size = 0;
            let mut queue = VecDeque::from([start]);
            while let Some(k) = queue.pop_front() {
                size += 1;
                let (i, j) = (k as i64 % n, k as i64 / n);
                for (di, dj) in [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)] {
                    let (ii, jj) = (i + di, j + dj);
                    if ii < 0 || jj < 0 || ii >= n || jj >= n {
                        continue;
                    }
                    let kk = (jj * n + ii) as usize;
                    if !seen[kk] && self.cells[kk] == Some(label) {
                        seen[kk] = true;
                        queue.push_back(kk);
                    }
                }
            }
            out.push((label, size));
        }
        out
    }
}

/// Phase diagram over the z-domain.
///
/// A node is bulk induced in a variable when its velocity is within `v_tol`
/// of zero or changes sign towards a 4-neighbour. The second rule gives the
/// zero-width bulk-induced lines a one-cell thickness at any resolution.
pub fn phase_diagram_z(p: &ModelParams, resolution: usize, v_tol: f64) -> Result<PhaseGrid> {
    p.validate()?;
    if resolution < 2 {
        return Err(Error::Config(format!("resolution must be at least 2, got {resolution}")));
    }
    let n = resolution;
    let step = |max: f64, i: usize| max * i as f64 / (n - 1) as f64;
    let z_alpha: Vec<f64> = (0..n).map(|i| step(p.z_alpha_max(), i)).collect();
    let z_beta: Vec<f64> = (0..n).map(|j| step(p.z_beta_max(), j)).collect();

    let velocities: Vec<Option<(f64, f64)>> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let z = RiemannVars::new(z_alpha[k % n], z_beta[k / n]);
            if !in_physical_domain(z, p, DOMAIN_TOL) {
                return None;
            }
            let z = z.checked(p).ok()?;
            if z.on_diagonal(DOMAIN_TOL) {
                let v = 2.0 * z.z_alpha - 1.0;
                return Some((v, v));
            }
            char_velocities(z, p).ok().map(|v| (v.v_alpha, v.v_beta))
        })
        .collect();

    let strict_sign = |v: f64| if v > v_tol { 1 } else if v < -v_tol { -1 } else { 0 };
    let mut cells = vec![None; n * n];
    for k in 0..n * n {
        let Some((va, vb)) = velocities[k] else { continue };
        let (i, j) = (k % n, k / n);
        let mut neighbours = Vec::with_capacity(4);
        if i > 0 {
            neighbours.push(k - 1);
        }
        if i + 1 < n {
            neighbours.push(k + 1);
        }
        if j > 0 {
            neighbours.push(k - n);
        }
        if j + 1 < n {
            neighbours.push(k + n);
        }
        let flips = |own: f64, pick: fn((f64, f64)) -> f64| {
            let s = strict_sign(own);
            neighbours
                .iter()
                .filter_map(|&m| velocities[m])
                .any(|nv| s != 0 && strict_sign(pick(nv)) == -s)
        };
        let ia = if flips(va, |v| v.0) {
            Induction::BulkInduced
        } else {
            Induction::from_velocity(va, v_tol)
        };
        let ib = if flips(vb, |v| v.1) {
            Induction::BulkInduced
        } else {
            Induction::from_velocity(vb, v_tol)
        };
        let phase = Phase::new(ia, ib);
        // the bands of both families only meet around (1/2, 1/2)
        cells[k] = Some(if phase.is_allowed() { phase } else { Phase::DEGENERATE });
    }
    Ok(PhaseGrid {
        params: *p,
        resolution: n,
        z_alpha,
        z_beta,
        cells,
        v_alpha: velocities.iter().map(|v| v.map_or(f64::NAN, |v| v.0)).collect(),
        v_beta: velocities.iter().map(|v| v.map_or(f64::NAN, |v| v.1)).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateName {
    NuBulletStarL,
    NuStarCircL,
    NuBulletCircL,
    NuBulletStarR,
    NuStarCircR,
    NuBulletCircR,
}

impl RateName {
    pub const ALL: [RateName; 6] = [
        Self::NuBulletStarL,
        Self::NuStarCircL,
        Self::NuBulletCircL,
        Self::NuBulletStarR,
        Self::NuStarCircR,
        Self::NuBulletCircR,
    ];

    pub fn as_str(self) -> &'static str {
        BoundaryRates::NAMES[self as usize]
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.as_str() == name)
    }

    /// Name of the same reservoir move in the mirror system.
    pub fn dual(self) -> Self {
        match self {
            Self::NuBulletStarL => Self::NuStarCircR,
            Self::NuStarCircL => Self::NuBulletStarR,
            Self::NuBulletCircL => Self::NuBulletCircR,
            Self::NuBulletStarR => Self::NuStarCircL,
            Self::NuStarCircR => Self::NuBulletStarL,
            Self::NuBulletCircR => Self::NuBulletCircL,
        }
    }

    pub fn set(self, rates: &mut BoundaryRates, value: f64) {
        let slot = match self {
            Self::NuBulletStarL => &mut rates.nu_bullet_star_l,
            Self::NuStarCircL => &mut rates.nu_star_circ_l,
            Self::NuBulletCircL => &mut rates.nu_bullet_circ_l,
            Self::NuBulletStarR => &mut rates.nu_bullet_star_r,
            Self::NuStarCircR => &mut rates.nu_star_circ_r,
            Self::NuBulletCircR => &mut rates.nu_bullet_circ_r,
        };
        *slot = value;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateAxis {
    pub name: RateName,
    pub min: f64,
    pub max: f64,
}

impl RateAxis {
    pub fn value(&self, i: usize, resolution: usize) -> f64 {
        if resolution <= 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * i as f64 / (resolution - 1) as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateSweep {
    pub x: RateAxis,
    pub y: RateAxis,
    /// Values of the four rates not on an axis.
    pub fixed: BoundaryRates,
}

impl RateSweep {
    pub fn validate(&self) -> Result<()> {
        if self.x.name == self.y.name {
            return Err(Error::Config(format!("both axes sweep {}", self.x.name.as_str())));
        }
        for axis in [self.x, self.y] {
            if !(axis.min > 0.0 && axis.max >= axis.min && axis.max.is_finite()) {
                return Err(Error::Config(format!(
                    "axis {} needs 0 < min <= max, got [{}, {}]",
                    axis.name.as_str(),
                    axis.min,
                    axis.max
                )));
            }
        }
        Ok(())
    }

    /// The sweep of the mirror system.
    pub fn dual(&self) -> Self {
        let rename = |a: RateAxis| RateAxis {
            name: a.name.dual(),
            ..a
        };
        Self {
            x: rename(self.x),
            y: rename(self.y),
            fixed: self.fixed.dual(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateCell {
    pub rate_x: f64,
    pub rate_y: f64,
    /// Converged state, or the best iterate when the solver gave up.
    pub state: Option<SteadyState>,
    pub converged: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateGrid {
    pub params: ModelParams,
    pub sweep: RateSweep,
    pub resolution: usize,
    /// Row-major with the y axis as the row index.
    pub cells: Vec<RateCell>,
}

/// Steady states over a grid of two boundary rates. Cells are solved
/// independently and in parallel; failures are recorded per cell.
pub fn phase_diagram_rates(
    p: &ModelParams,
    sweep: &RateSweep,
    resolution: usize,
    cfg: &SolverConfig,
) -> Result<RateGrid> {
    p.validate()?;
    sweep.validate()?;
    cfg.validate()?;
    if resolution == 0 {
        return Err(Error::Config("resolution must be at least 1".into()));
    }
    let n = resolution;
    let cells = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (rate_x, rate_y) = (sweep.x.value(k % n, n), sweep.y.value(k / n, n));
            let mut rates = sweep.fixed;
            sweep.x.name.set(&mut rates, rate_x);
            sweep.y.name.set(&mut rates, rate_y);
            match solve_steady_state(&rates, p, cfg) {
                Ok(s) => RateCell {
                    rate_x,
                    rate_y,
                    state: Some(s),
                    converged: true,
                    error: None,
                },
                Err(Error::NonConvergence { best }) => RateCell {
                    rate_x,
                    rate_y,
                    error: Some(format!("no convergence, residual {:.3e}", best.residual)),
                    state: Some(*best),
                    converged: false,
                },
                Err(e) => RateCell {
                    rate_x,
                    rate_y,
                    state: None,
                    converged: false,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    Ok(RateGrid {
        params: *p,
        sweep: *sweep,
        resolution: n,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hydro::char_velocities;

    fn p89() -> ModelParams {
        ModelParams::new(0.8, 0.9).unwrap()
    }

    #[test]
    fn labels_roundtrip() {
        for phase in Phase::ALLOWED.iter().chain([&Phase::DEGENERATE]) {
            assert_eq!(Phase::from_label(&phase.label()), Some(*phase));
            assert_eq!(phase.dual().dual(), *phase);
        }
        assert_eq!(Phase::from_label("LX"), None);
        assert_eq!(Phase::from_label("LLL"), None);
        // the allowed set is closed under duality
        for phase in Phase::ALLOWED {
            assert!(phase.dual().is_allowed());
        }
    }

    #[test]
    fn classification_by_signs() {
        let p = p89();
        // near the empty lattice v_alpha < 0 < v_beta
        let z = RiemannVars::new(0.05, 0.05);
        assert_eq!(classify_phase(z, &p, DEFAULT_V_TOL).unwrap().label(), "RL");
        // diagonal, left of the middle: both negative
        assert_eq!(classify_phase(RiemannVars::new(0.2, 0.8), &p, DEFAULT_V_TOL).unwrap().label(), "RR");
        assert_eq!(classify_phase(RiemannVars::new(0.7, 0.3), &p, DEFAULT_V_TOL).unwrap().label(), "LL");
        assert!(classify_phase(RiemannVars::new(0.5, 0.5), &p, DEFAULT_V_TOL)
            .unwrap()
            .is_degenerate());
    }

    #[test]
    fn z_scan_gives_five_labels_and_regions() {
        let grid = phase_diagram_z(&p89(), 120, DEFAULT_V_TOL).unwrap();
        let labels: Vec<Phase> = grid
            .distinct_labels()
            .into_iter()
            .filter(|p| !p.is_degenerate())
            .collect();
        assert_eq!(labels.len(), 5, "{labels:?}");
        assert_eq!(grid.regions().len(), 5, "{:?}", grid.regions());
    }

    #[test]
    fn tiny_grid_is_valid() {
        let grid = phase_diagram_z(&p89(), 2, DEFAULT_V_TOL).unwrap();
        assert_eq!(grid.cells.len(), 4);
        // (a_max, b_max) lies outside the domain
        assert!(grid.get(1, 1).is_none());
        for p in grid.cells.iter().flatten() {
            assert!(p.is_allowed() || p.is_degenerate());
        }
        assert!(phase_diagram_z(&p89(), 1, DEFAULT_V_TOL).is_err());
    }

    #[test]
    fn bulk_induced_cells_straddle_zero_velocity() {
        let grid = phase_diagram_z(&p89(), 60, DEFAULT_V_TOL).unwrap();
        for (k, cell) in grid.cells.iter().enumerate() {
            let Some(phase) = cell else { continue };
            if phase.induction_alpha != Induction::BulkInduced || phase.is_degenerate() {
                continue;
            }
            let z = RiemannVars::new(grid.z_alpha[k % 60], grid.z_beta[k / 60]);
            let v = char_velocities(z, &p89()).unwrap().v_alpha;
            // within one grid step of the zero line, velocities are small
            assert!(v.abs() < 0.1, "{v} at {z:?}");
        }
    }

    #[test]
    fn single_point_sweep() {
        let fixed = BoundaryRates::uniform(0.5);
        let axis = |name| RateAxis { name, min: 0.5, max: 0.9 };
        let sweep = RateSweep {
            x: axis(RateName::NuBulletStarL),
            y: axis(RateName::NuStarCircL),
            fixed,
        };
        let grid = phase_diagram_rates(&p89(), &sweep, 1, &SolverConfig::default()).unwrap();
        assert_eq!(grid.cells.len(), 1);
        let direct = solve_steady_state(&fixed, &p89(), &SolverConfig::default()).unwrap();
        assert_eq!(grid.cells[0].state.as_ref().unwrap(), &direct);
    }

    #[test]
    fn sweep_axes_must_differ() {
        let axis = RateAxis {
            name: RateName::NuBulletStarL,
            min: 0.1,
            max: 1.0,
        };
        let sweep = RateSweep {
            x: axis,
            y: axis,
            fixed: BoundaryRates::uniform(0.5),
        };
        assert!(sweep.validate().is_err());
    }

    #[test]
    fn rate_names_parse() {
        for r in RateName::ALL {
            assert_eq!(RateName::parse(r.as_str()), Some(r));
            assert_eq!(r.dual().dual(), r);
        }
        let mut rates = BoundaryRates::uniform(0.5);
        RateName::NuStarCircR.set(&mut rates, 0.9);
        assert_eq!(rates.nu_star_circ_r, 0.9);
    }
}
