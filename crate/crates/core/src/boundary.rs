//! Open-boundary steady states.
//!
//! The reservoirs fix the currents through the first and last sites as
//! linear functions of their densities. Stationarity requires these to agree
//! with the bulk current, and the bulk density is the Riemann solution at the
//! origin for data given by the two boundary densities. The solver iterates
//! that closure with damping until the currents agree.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hydro::{currents_from_rho, z_from_rho, Currents, Densities, ModelParams, RiemannVars};
use crate::phase::{classify_phase, Phase, DEFAULT_V_TOL};
use crate::riemann::{eval_solution, solve_riemann, RiemannData};

/// Wave speeds within this distance of zero mark a phase boundary.
pub const STANDING_WAVE_TOL: f64 = 1e-6;

/// Simplex violations beyond this are reported as clamping.
const CLAMP_REPORT_TOL: f64 = 1e-12;

/// Unclamped inversions farther than this outside the simplex are rejected.
const MAX_INFEASIBILITY: f64 = 0.5;

/// Reservoir rates. `nu_x_y_l` converts the first site from `y` to `x`
/// where that move exists; the right side mirrors this.
///
/// Left: `◦ -> •` at `nu_bullet_circ_l`, `◦ -> ∗` at `nu_star_circ_l`,
/// `∗ -> •` at `nu_bullet_star_l`.
/// Right: `• -> ∗` at `nu_bullet_star_r`, `• -> ◦` at `nu_bullet_circ_r`,
/// `∗ -> ◦` at `nu_star_circ_r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryRates {
    pub nu_bullet_star_l: f64,
    pub nu_star_circ_l: f64,
    pub nu_bullet_circ_l: f64,
    pub nu_bullet_star_r: f64,
    pub nu_star_circ_r: f64,
    pub nu_bullet_circ_r: f64,
}

impl BoundaryRates {
    pub fn uniform(nu: f64) -> Self {
        Self {
            nu_bullet_star_l: nu,
            nu_star_circ_l: nu,
            nu_bullet_circ_l: nu,
            nu_bullet_star_r: nu,
            nu_star_circ_r: nu,
            nu_bullet_circ_r: nu,
        }
    }

    pub fn as_array(&self) -> [f64; 6] {
        [
            self.nu_bullet_star_l,
            self.nu_star_circ_l,
            self.nu_bullet_circ_l,
            self.nu_bullet_star_r,
            self.nu_star_circ_r,
            self.nu_bullet_circ_r,
        ]
    }

    pub const NAMES: [&'static str; 6] = [
        "nu_bullet_star_l",
        "nu_star_circ_l",
        "nu_bullet_circ_l",
        "nu_bullet_star_r",
        "nu_star_circ_r",
        "nu_bullet_circ_r",
    ];

    pub fn validate(&self) -> Result<()> {
        for (name, v) in Self::NAMES.iter().zip(self.as_array()) {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidRates(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Rates of the mirror system: species exchanged and left/right swapped.
    pub fn dual(&self) -> Self {
        Self {
            nu_bullet_star_l: self.nu_star_circ_r,
            nu_star_circ_l: self.nu_bullet_star_r,
            nu_bullet_circ_l: self.nu_bullet_circ_r,
            nu_bullet_star_r: self.nu_star_circ_l,
            nu_star_circ_r: self.nu_bullet_star_l,
            nu_bullet_circ_r: self.nu_bullet_circ_l,
        }
    }
}

pub fn left_boundary_currents(rho_left: Densities, rates: &BoundaryRates) -> Currents {
    Currents::new(
        -(rates.nu_bullet_circ_l + rates.nu_star_circ_l) * rho_left.rho_circ,
        rates.nu_bullet_circ_l * rho_left.rho_circ + rates.nu_bullet_star_l * rho_left.rho_star(),
    )
}

pub fn right_boundary_currents(rho_right: Densities, rates: &BoundaryRates) -> Currents {
    Currents::new(
        -(rates.nu_bullet_circ_r * rho_right.rho_bullet + rates.nu_star_circ_r * rho_right.rho_star()),
        (rates.nu_bullet_circ_r + rates.nu_bullet_star_r) * rho_right.rho_bullet,
    )
}

/// Boundary density reproducing a prescribed current, projected onto the
/// simplex when the exact inverse leaves it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Inversion {
    pub rho: Densities,
    /// Simplex violation of the exact inverse before projection.
    pub violation: f64,
}

impl Inversion {
    pub fn clamped(&self) -> bool {
        self.violation > CLAMP_REPORT_TOL
    }
}

fn finish_inversion(raw: Densities, target: Currents, side: &'static str) -> Result<Inversion> {
    let violation = raw.simplex_violation();
    if !violation.is_finite() || violation > MAX_INFEASIBILITY {
        return Err(Error::InfeasibleCurrent {
            side,
            j_circ: target.j_circ,
            j_bullet: target.j_bullet,
            distance: violation,
        });
    }
    Ok(Inversion {
        rho: if violation > 0.0 { raw.project_to_simplex() } else { raw },
        violation,
    })
}

pub fn invert_left(target: Currents, rates: &BoundaryRates) -> Result<Inversion> {
    let rho_circ = -target.j_circ / (rates.nu_bullet_circ_l + rates.nu_star_circ_l);
    let rho_bullet = 1.0 - rho_circ - (target.j_bullet - rates.nu_bullet_circ_l * rho_circ) / rates.nu_bullet_star_l;
    finish_inversion(Densities::new(rho_circ, rho_bullet), target, "left")
}

pub fn invert_right(target: Currents, rates: &BoundaryRates) -> Result<Inversion> {
    let rho_bullet = target.j_bullet / (rates.nu_bullet_circ_r + rates.nu_bullet_star_r);
    let rho_circ = 1.0 - rho_bullet - (-target.j_circ - rates.nu_bullet_circ_r * rho_bullet) / rates.nu_star_circ_r;
    finish_inversion(Densities::new(rho_circ, rho_bullet), target, "right")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub damping: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub initial_guess: Option<(Densities, Densities)>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            damping: 0.5,
            tolerance: 1e-10,
            max_iterations: 100_000,
            initial_guess: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::Config(format!("damping must lie in (0, 1], got {}", self.damping)));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Config(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        if let Some((l, r)) = self.initial_guess {
            l.checked()?;
            r.checked()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteadyState {
    pub rho_left: Densities,
    pub rho_right: Densities,
    pub rho_bulk: Densities,
    pub z_left: RiemannVars,
    pub z_right: RiemannVars,
    pub z_bulk: RiemannVars,
    pub currents: Currents,
    pub phase: Phase,
    pub iterations: usize,
    /// Largest mismatch between the boundary currents and the bulk current.
    pub residual: f64,
    pub on_phase_boundary: bool,
    pub converged: bool,
    /// Number of iterations in which an inversion had to be projected.
    pub clamp_events: usize,
    /// Whether the inversions at the reported current needed projection.
    pub clamped_left: bool,
    pub clamped_right: bool,
}

struct Evaluation {
    rho_bulk: Densities,
    z_left: RiemannVars,
    z_right: RiemannVars,
    z_bulk: RiemannVars,
    currents: Currents,
    residual: f64,
    standing_wave: bool,
}

fn evaluate(rho_left: Densities, rho_right: Densities, rates: &BoundaryRates, p: &ModelParams) -> Result<Evaluation> {
    let data = RiemannData::from_densities(rho_left, rho_right, *p)?;
    let sol = solve_riemann(data)?;
    let z_bulk = eval_solution(&sol, 0.0)?;
    let rho_bulk = crate::hydro::rho_from_z(z_bulk, p)?;
    let currents = currents_from_rho(rho_bulk, p)?;
    let residual = left_boundary_currents(rho_left, rates)
        .max_abs_diff(&currents)
        .max(right_boundary_currents(rho_right, rates).max_abs_diff(&currents));
    Ok(Evaluation {
        rho_bulk,
        z_left: sol.data.z_left,
        z_right: sol.data.z_right,
        z_bulk,
        currents,
        residual,
        standing_wave: sol.has_standing_wave(STANDING_WAVE_TOL),
    })
}

/// Damped fixed-point iteration of the boundary closure.
///
/// Returns [`Error::NonConvergence`] carrying the iterate with the smallest
/// residual when `cfg.max_iterations` is exhausted.
pub fn solve_steady_state(rates: &BoundaryRates, p: &ModelParams, cfg: &SolverConfig) -> Result<SteadyState> {
    rates.validate()?;
    p.validate()?;
    cfg.validate()?;
    let third = Densities::new(1.0 / 3.0, 1.0 / 3.0);
    let (mut rho_left, mut rho_right) = cfg.initial_guess.unwrap_or((third, third));
    rho_left = rho_left.checked()?;
    rho_right = rho_right.checked()?;

    let mut clamp_events = 0;
    let mut best: Option<SteadyState> = None;
    for iteration in 0..cfg.max_iterations {
        let ev = evaluate(rho_left, rho_right, rates, p)?;
        let left = invert_left(ev.currents, rates)?;
        let right = invert_right(ev.currents, rates)?;
        let state = SteadyState {
            rho_left,
            rho_right,
            rho_bulk: ev.rho_bulk,
            z_left: ev.z_left,
            z_right: ev.z_right,
            z_bulk: ev.z_bulk,
            currents: ev.currents,
            phase: classify_phase(ev.z_bulk, p, DEFAULT_V_TOL)?,
            iterations: iteration,
            residual: ev.residual,
            on_phase_boundary: ev.standing_wave,
            converged: false,
            clamp_events,
            clamped_left: left.clamped(),
            clamped_right: right.clamped(),
        };
        if ev.residual <= cfg.tolerance && !state.clamped_left && !state.clamped_right {
            return Ok(SteadyState { converged: true, ..state });
        }
        if best.as_ref().map_or(true, |b| state.residual < b.residual) {
            best = Some(state);
        }
        if left.clamped() || right.clamped() {
            clamp_events += 1;
        }
        let theta = cfg.damping;
        let mix = |old: Densities, new: Densities| {
            Densities::new(
                (1.0 - theta) * old.rho_circ + theta * new.rho_circ,
                (1.0 - theta) * old.rho_bullet + theta * new.rho_bullet,
            )
        };
        rho_left = mix(rho_left, left.rho);
        rho_right = mix(rho_right, right.rho);
    }
    let mut best = best.expect("at least one iteration ran");
    best.iterations = cfg.max_iterations;
    best.clamp_events = clamp_events;
    Err(Error::NonConvergence { best: Box::new(best) })
}

/// Bulk Riemann variables of a steady state, recomputed from its bulk density.
pub fn bulk_riemann_vars(state: &SteadyState, p: &ModelParams) -> Result<RiemannVars> {
    z_from_rho(state.rho_bulk, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn p89() -> ModelParams {
        ModelParams::new(0.8, 0.9).unwrap()
    }

    #[test]
    fn left_current_examples() {
        let r = BoundaryRates::uniform(0.5);
        let j = left_boundary_currents(Densities::new(0.2, 0.3), &r);
        assert_abs_diff_eq!(j.j_bullet, 0.35, epsilon = 1e-15);
        assert_abs_diff_eq!(j.j_circ, -0.2, epsilon = 1e-15);
        let j = left_boundary_currents(Densities::new(0.0, 0.0), &r);
        assert_eq!(j, Currents::new(0.0, 0.5));
        let j = left_boundary_currents(Densities::new(0.0, 1.0), &r);
        assert_eq!(j.j_bullet, 0.0);
        assert_eq!(j.j_circ, 0.0);
    }

    #[test]
    fn right_current_examples() {
        let r = BoundaryRates::uniform(0.5);
        let j = right_boundary_currents(Densities::new(0.3, 0.4), &r);
        assert_abs_diff_eq!(j.j_bullet, 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(j.j_circ, -0.35, epsilon = 1e-15);
        let j = right_boundary_currents(Densities::new(1.0, 0.0), &r);
        assert_eq!(j.j_bullet, 0.0);
        assert_eq!(j.j_circ, 0.0);
        let j = right_boundary_currents(Densities::new(0.0, 1.0), &r);
        assert_eq!(j, Currents::new(-0.5, 1.0));
    }

    #[test]
    fn zero_current_inversions() {
        let r = BoundaryRates::uniform(0.7);
        let inv = invert_left(Currents::new(0.0, 0.7), &r).unwrap();
        assert!(inv.rho.max_abs_diff(&Densities::new(0.0, 0.0)) < 1e-15);
        assert!(!inv.clamped());
        let inv = invert_right(Currents::new(-0.7, 0.0), &r).unwrap();
        assert!(inv.rho.max_abs_diff(&Densities::new(0.0, 0.0)) < 1e-15);
    }

    #[test]
    fn infeasible_and_clamped_inversions() {
        let r = BoundaryRates::uniform(0.5);
        // rho_circ would be 1.2
        let inv = invert_left(Currents::new(-1.2, 0.0), &r);
        assert!(matches!(inv, Err(Error::InfeasibleCurrent { side: "left", .. })));
        let inv = invert_left(Currents::new(-0.2, 0.6), &r).unwrap();
        assert!(inv.clamped());
        assert_eq!(inv.rho.simplex_violation(), 0.0);
    }

    #[test]
    fn zero_rate_is_rejected() {
        let mut r = BoundaryRates::uniform(0.5);
        r.nu_star_circ_r = 0.0;
        assert!(matches!(
            solve_steady_state(&r, &p89(), &SolverConfig::default()),
            Err(Error::InvalidRates(_))
        ));
    }

    #[test]
    fn rate_duality_is_an_involution() {
        let r = BoundaryRates {
            nu_bullet_star_l: 0.1,
            nu_star_circ_l: 0.2,
            nu_bullet_circ_l: 0.3,
            nu_bullet_star_r: 0.4,
            nu_star_circ_r: 0.5,
            nu_bullet_circ_r: 0.6,
        };
        assert_eq!(r.dual().dual(), r);
        // boundary currents are covariant: left of the dual = mirrored right
        let rho = Densities::new(0.25, 0.35);
        let j_right = right_boundary_currents(rho, &r);
        let j_dual_left = left_boundary_currents(rho.swapped(), &r.dual());
        assert!(j_dual_left.max_abs_diff(&j_right.dual()) < 1e-15);
    }

    #[test]
    fn reference_configuration_converges() {
        let s = solve_steady_state(&BoundaryRates::uniform(0.5), &p89(), &SolverConfig::default()).unwrap();
        assert!(s.converged);
        assert!(s.residual <= 1e-10);
        assert!(!s.clamped_left && !s.clamped_right);
        assert_abs_diff_eq!(s.rho_left.rho_circ, 0.2473, epsilon = 2e-3);
        assert_abs_diff_eq!(s.rho_bulk.rho_bullet, 0.4806, epsilon = 2e-3);
        // stationarity
        let jl = left_boundary_currents(s.rho_left, &BoundaryRates::uniform(0.5));
        let jr = right_boundary_currents(s.rho_right, &BoundaryRates::uniform(0.5));
        assert!(jl.max_abs_diff(&s.currents) <= 1e-10);
        assert!(jr.max_abs_diff(&s.currents) <= 1e-10);
    }

    #[test]
    fn converged_state_is_a_fixed_point() {
        let r = BoundaryRates::uniform(0.5);
        let s = solve_steady_state(&r, &p89(), &SolverConfig::default()).unwrap();
        let cfg = SolverConfig {
            initial_guess: Some((s.rho_left, s.rho_right)),
            ..SolverConfig::default()
        };
        let again = solve_steady_state(&r, &p89(), &cfg).unwrap();
        assert_eq!(again.iterations, 0);
        assert!(again.rho_bulk.max_abs_diff(&s.rho_bulk) < 1e-9);
    }

    #[test]
    fn one_iteration_reports_best_iterate() {
        let cfg = SolverConfig {
            max_iterations: 1,
            ..SolverConfig::default()
        };
        match solve_steady_state(&BoundaryRates::uniform(0.5), &p89(), &cfg) {
            Err(Error::NonConvergence { best }) => {
                assert!(best.residual > 1e-10);
                assert!(!best.converged);
                assert_eq!(best.iterations, 1);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn symmetric_system_is_self_dual() {
        let p = ModelParams::new(0.7, 0.7).unwrap();
        let r = BoundaryRates {
            nu_bullet_star_l: 0.3,
            nu_star_circ_l: 0.6,
            nu_bullet_circ_l: 0.4,
            nu_bullet_star_r: 0.6,
            nu_star_circ_r: 0.3,
            nu_bullet_circ_r: 0.4,
        };
        assert_eq!(r.dual(), r);
        let s = solve_steady_state(&r, &p, &SolverConfig::default()).unwrap();
        assert!(s.rho_left.max_abs_diff(&s.rho_right.swapped()) < 1e-8);
        assert!(s.rho_bulk.max_abs_diff(&s.rho_bulk.swapped()) < 1e-8);
    }

    proptest! {
        #[test]
        fn inversions_roundtrip(
            nus in proptest::array::uniform6(0.05f64..2.0),
            c in 0.0f64..1.0,
            frac in 0.0f64..1.0,
        ) {
            let r = BoundaryRates {
                nu_bullet_star_l: nus[0],
                nu_star_circ_l: nus[1],
                nu_bullet_circ_l: nus[2],
                nu_bullet_star_r: nus[3],
                nu_star_circ_r: nus[4],
                nu_bullet_circ_r: nus[5],
            };
            let rho = Densities::new(c, (1.0 - c) * frac);
            let back = invert_left(left_boundary_currents(rho, &r), &r).unwrap();
            prop_assert!(back.rho.max_abs_diff(&rho) < 1e-12);
            let back = invert_right(right_boundary_currents(rho, &r), &r).unwrap();
            prop_assert!(back.rho.max_abs_diff(&rho) < 1e-12);
        }
    }
}
