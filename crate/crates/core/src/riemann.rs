//! Self-similar solutions of the Riemann problem in Riemann variables.
//!
//! An alpha wave changes only `z_alpha`, a beta wave only `z_beta`. Going
//! from `z_left` to `z_right` the solution first crosses an alpha wave at
//! fixed `z_beta = z_beta_left`, then a beta wave at fixed
//! `z_alpha = z_alpha_right`. Admissible shocks decrease `z_alpha` or
//! increase `z_beta`; the opposite directions open rarefaction fans. When the
//! intermediate state `(z_alpha_right, z_beta_left)` would leave the domain
//! the alpha fan runs into the diagonal, follows the diagonal fan and leaves
//! it through a beta fan.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hydro::{
    char_velocities, currents_from_z, in_physical_domain, rho_from_z, Densities, ModelParams,
    RiemannVars, z_from_rho, DOMAIN_TOL,
};

/// Coordinate comparisons used to classify initial data.
pub const CLASSIFY_TOL: f64 = 1e-10;

/// Shocks smaller than this travel at the characteristic speed.
const SMALL_SHOCK: f64 = 1e-8;

/// Fan roots are bracketed down to this interval width.
const BISECTION_WIDTH: f64 = 1e-13;

/// Allowed overlap between consecutive wave speed intervals.
const ORDERING_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiemannData {
    pub z_left: RiemannVars,
    pub z_right: RiemannVars,
    pub params: ModelParams,
}

impl RiemannData {
    pub fn new(z_left: RiemannVars, z_right: RiemannVars, params: ModelParams) -> Self {
        Self { z_left, z_right, params }
    }

    pub fn from_densities(rho_left: Densities, rho_right: Densities, params: ModelParams) -> Result<Self> {
        Ok(Self::new(z_from_rho(rho_left, &params)?, z_from_rho(rho_right, &params)?, params))
    }

    /// The same problem seen in the mirror model: species exchanged, space
    /// reflected, so left and right trade places.
    pub fn dual(&self) -> Self {
        Self::new(self.z_right.swapped(), self.z_left.swapped(), self.params.dual())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WaveFamily {
    AlphaShock,
    BetaShock,
    AlphaFan,
    BetaFan,
    DiagonalFan,
}

impl WaveFamily {
    pub fn is_shock(self) -> bool {
        matches!(self, Self::AlphaShock | Self::BetaShock)
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::AlphaShock => "alpha-shock",
            Self::BetaShock => "beta-shock",
            Self::AlphaFan => "alpha-fan",
            Self::BetaFan => "beta-fan",
            Self::DiagonalFan => "diagonal-fan",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wave {
    pub family: WaveFamily,
    pub speed_lo: f64,
    pub speed_hi: f64,
    pub state_before: RiemannVars,
    pub state_after: RiemannVars,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveFanSolution {
    pub data: RiemannData,
    pub waves: Vec<Wave>,
    pub constant_states: Vec<RiemannVars>,
}

impl WaveFanSolution {
    /// `"constant"` or the wave families joined by `" + "`.
    pub fn scenario(&self) -> String {
        if self.waves.is_empty() {
            return "constant".to_string();
        }
        self.waves.iter().map(|w| w.family.label()).collect::<Vec<_>>().join(" + ")
    }

    /// Whether a shock or a fan edge travels with speed within `tol` of zero.
    pub fn has_standing_wave(&self, tol: f64) -> bool {
        self.waves
            .iter()
            .any(|w| w.speed_lo.abs() <= tol || w.speed_hi.abs() <= tol)
    }
}

/// Velocity of the family a wave belongs to.
fn family_velocity(family: WaveFamily, z: RiemannVars, p: &ModelParams) -> Result<f64> {
    Ok(match family {
        WaveFamily::AlphaShock | WaveFamily::AlphaFan => char_velocities(z, p)?.v_alpha,
        WaveFamily::BetaShock | WaveFamily::BetaFan => char_velocities(z, p)?.v_beta,
        WaveFamily::DiagonalFan => 2.0 * z.z_alpha - 1.0,
    })
}

/// Rankine–Hugoniot speed of a shock joining `z_minus` (left) to `z_plus`
/// (right). The two states must share the Riemann variable the family does
/// not carry; admissibility is not checked here.
pub fn shock_speed(family: WaveFamily, z_minus: RiemannVars, z_plus: RiemannVars, p: &ModelParams) -> Result<f64> {
    let (shared_gap, amplitude) = match family {
        WaveFamily::AlphaShock => (
            (z_minus.z_beta - z_plus.z_beta).abs(),
            (z_minus.z_alpha - z_plus.z_alpha).abs(),
        ),
        WaveFamily::BetaShock => (
            (z_minus.z_alpha - z_plus.z_alpha).abs(),
            (z_minus.z_beta - z_plus.z_beta).abs(),
        ),
        other => {
            return Err(Error::InvalidShockPair {
                family: other.label(),
                reason: "not a shock family".into(),
            })
        }
    };
    if shared_gap > CLASSIFY_TOL {
        return Err(Error::InvalidShockPair {
            family: family.label(),
            reason: format!("the conserved Riemann variable differs by {shared_gap:.3e}"),
        });
    }
    for z in [z_minus, z_plus] {
        if !in_physical_domain(z, p, DOMAIN_TOL) {
            return Err(Error::Domain(format!("shock state ({}, {}) outside the domain", z.z_alpha, z.z_beta)));
        }
    }
    if amplitude < SMALL_SHOCK {
        let mid = RiemannVars::new(
            0.5 * (z_minus.z_alpha + z_plus.z_alpha),
            0.5 * (z_minus.z_beta + z_plus.z_beta),
        );
        return family_velocity(family, mid, p);
    }
    let (r0, r1) = (rho_from_z(z_minus, p)?, rho_from_z(z_plus, p)?);
    let (j0, j1) = (currents_from_z(z_minus, p)?, currents_from_z(z_plus, p)?);
    let dr = [r1.rho_circ - r0.rho_circ, r1.rho_bullet - r0.rho_bullet];
    let dj = [j1.j_circ - j0.j_circ, j1.j_bullet - j0.j_bullet];
    // the jumps are parallel on a shock line; project to use both components
    let norm = dr[0] * dr[0] + dr[1] * dr[1];
    if norm == 0.0 {
        return family_velocity(family, z_minus, p);
    }
    Ok((dr[0] * dj[0] + dr[1] * dj[1]) / norm)
}

/// State inside a rarefaction fan at ray `xi`.
///
/// For alpha fans `fixed_var` is `z_beta` and the root is sought for
/// `z_alpha` in `bracket`; for beta fans the roles swap. The diagonal fan is
/// explicit and ignores `fixed_var` and `bracket`.
pub fn fan_state_at(
    family: WaveFamily,
    fixed_var: f64,
    xi: f64,
    p: &ModelParams,
    bracket: (f64, f64),
) -> Result<RiemannVars> {
    let state = |x: f64| match family {
        WaveFamily::AlphaFan => RiemannVars::new(x, fixed_var),
        _ => RiemannVars::new(fixed_var, x),
    };
    let velocity = |x: f64| -> Result<f64> {
        let v = char_velocities(state(x), p)?;
        Ok(if family == WaveFamily::AlphaFan { v.v_alpha } else { v.v_beta })
    };
    match family {
        WaveFamily::DiagonalFan => return Ok(RiemannVars::new(0.5 * (1.0 + xi), 0.5 * (1.0 - xi))),
        WaveFamily::AlphaFan | WaveFamily::BetaFan => {}
        other => {
            return Err(Error::Config(format!("{} is not a rarefaction fan", other.label())));
        }
    }
    let (mut lo, mut hi) = (bracket.0.min(bracket.1), bracket.0.max(bracket.1));
    let mut f_lo = velocity(lo)? - xi;
    let f_hi = velocity(hi)? - xi;
    if f_lo == 0.0 {
        return Ok(state(lo));
    }
    if f_hi == 0.0 {
        return Ok(state(hi));
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket { f_lo, f_hi });
    }
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        let f_mid = velocity(mid)? - xi;
        if f_mid == 0.0 {
            return Ok(state(mid));
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(state(0.5 * (lo + hi)))
}

fn make_wave(family: WaveFamily, before: RiemannVars, after: RiemannVars, p: &ModelParams) -> Result<Wave> {
    let (speed_lo, speed_hi) = if family.is_shock() {
        let s = shock_speed(family, before, after, p)?;
        (s, s)
    } else {
        (family_velocity(family, before, p)?, family_velocity(family, after, p)?)
    };
    Ok(Wave {
        family,
        speed_lo,
        speed_hi,
        state_before: before,
        state_after: after,
    })
}

/// Builds the wave sequence joining `data.z_left` to `data.z_right`.
pub fn solve_riemann(data: RiemannData) -> Result<WaveFanSolution> {
    let p = data.params;
    p.validate()?;
    let left = data.z_left.checked(&p)?;
    let right = data.z_right.checked(&p)?;
    let (a_l, b_l) = (left.z_alpha, left.z_beta);
    let (a_r, b_r) = (right.z_alpha, right.z_beta);

    // (family, target state) legs; zero-amplitude legs are dropped below
    let mut legs: Vec<(WaveFamily, RiemannVars)> = Vec::with_capacity(3);
    if a_l < a_r - CLASSIFY_TOL && a_r + b_l >= 1.0 - CLASSIFY_TOL {
        legs.push((WaveFamily::AlphaFan, RiemannVars::new(1.0 - b_l, b_l)));
        legs.push((WaveFamily::DiagonalFan, RiemannVars::new(a_r, 1.0 - a_r)));
        legs.push((WaveFamily::BetaFan, right));
    } else {
        let alpha = if a_l > a_r { WaveFamily::AlphaShock } else { WaveFamily::AlphaFan };
        let beta = if b_l < b_r { WaveFamily::BetaShock } else { WaveFamily::BetaFan };
        legs.push((alpha, RiemannVars::new(a_r, b_l)));
        legs.push((beta, right));
    }

    let mut waves = Vec::with_capacity(legs.len());
    let mut constant_states = vec![left];
    let mut current = left;
    for (i, (family, target)) in legs.iter().enumerate() {
        let last = i + 1 == legs.len();
        let target = if last { right } else { *target };
        let amplitude = current.max_abs_diff(&target);
        if amplitude <= CLASSIFY_TOL {
            if last {
                // absorb the tiny leftover so the chain ends exactly at z_right
                *constant_states.last_mut().unwrap() = right;
            }
            current = if last { right } else { current };
            continue;
        }
        let before = match family {
            WaveFamily::AlphaShock | WaveFamily::AlphaFan => RiemannVars::new(current.z_alpha, target.z_beta),
            WaveFamily::BetaShock | WaveFamily::BetaFan => RiemannVars::new(target.z_alpha, current.z_beta),
            WaveFamily::DiagonalFan => current,
        };
        let wave = make_wave(*family, before, target, &p)?;
        waves.push(wave);
        constant_states.push(target);
        current = target;
    }
    if waves.is_empty() {
        constant_states = vec![left];
    }
    // keep the chain consistent: each wave starts where the previous ended
    for (k, w) in waves.iter_mut().enumerate() {
        w.state_before = constant_states[k];
        w.state_after = constant_states[k + 1];
    }

    for (k, pair) in waves.windows(2).enumerate() {
        if pair[0].speed_hi > pair[1].speed_lo + ORDERING_SLACK {
            return Err(Error::SpeedOrdering {
                index: k,
                speed_hi: pair[0].speed_hi,
                next_lo: pair[1].speed_lo,
            });
        }
    }
    Ok(WaveFanSolution {
        data: RiemannData::new(left, right, p),
        waves,
        constant_states,
    })
}

/// Solution at the ray `xi = x / t`. Exactly on a shock the right state is
/// returned.
pub fn eval_solution(sol: &WaveFanSolution, xi: f64) -> Result<RiemannVars> {
    let p = &sol.data.params;
    for (k, wave) in sol.waves.iter().enumerate() {
        if xi < wave.speed_lo {
            return Ok(sol.constant_states[k]);
        }
        if wave.family.is_shock() {
            continue;
        }
        if xi <= wave.speed_hi {
            if xi == wave.speed_lo {
                return Ok(wave.state_before);
            }
            if xi == wave.speed_hi {
                return Ok(wave.state_after);
            }
            let (b, a) = (wave.state_before, wave.state_after);
            return match wave.family {
                WaveFamily::AlphaFan => fan_state_at(wave.family, b.z_beta, xi, p, (b.z_alpha, a.z_alpha)),
                WaveFamily::BetaFan => fan_state_at(wave.family, b.z_alpha, xi, p, (a.z_beta, b.z_beta)),
                _ => fan_state_at(wave.family, 0.0, xi, p, (0.0, 1.0)),
            };
        }
    }
    Ok(*sol.constant_states.last().expect("at least one constant state"))
}

/// Bulk density selected by the boundary densities: the Riemann solution at
/// the origin ray.
pub fn r0(rho_left: Densities, rho_right: Densities, p: &ModelParams) -> Result<Densities> {
    let sol = solve_riemann(RiemannData::from_densities(rho_left, rho_right, *p)?)?;
    rho_from_z(eval_solution(&sol, 0.0)?, p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub xi: f64,
    pub z: RiemannVars,
    pub rho: Densities,
}

/// Samples the solution at `n` equally spaced rays in `[xi_min, xi_max]`.
pub fn sample_profile(sol: &WaveFanSolution, xi_min: f64, xi_max: f64, n: usize) -> Result<Vec<ProfilePoint>> {
    let p = &sol.data.params;
    (0..n)
        .map(|i| {
            let xi = if n == 1 {
                xi_min
            } else {
                xi_min + (xi_max - xi_min) * i as f64 / (n - 1) as f64
            };
            let z = eval_solution(sol, xi)?;
            Ok(ProfilePoint { xi, z, rho: rho_from_z(z, p)? })
        })
        .collect()
}
