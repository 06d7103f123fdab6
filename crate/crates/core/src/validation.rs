//! Acceptance suites.
//!
//! Every suite compares library output against an oracle written here from
//! scratch: the implicit density and current relations in their rational
//! form, finite differences, closed-form scalar solutions and lattice
//! simulations. Tolerances are fixed constants.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::boundary::{solve_steady_state, BoundaryRates, SolverConfig};
use crate::error::Error;
use crate::hydro::{
    char_velocities, currents_from_rho, currents_from_z, rho_from_z, z_from_rho, Densities, ModelParams,
    RiemannVars,
};
use crate::kmc::{self, window_average, SimConfig, StepEnsemble, StepRunConfig};
use crate::phase::{phase_diagram_z, Induction, Phase, DEFAULT_V_TOL};
use crate::riemann::{eval_solution, shock_speed, solve_riemann, RiemannData, WaveFamily};
use crate::scalar::{extremal_current, tasep_current, tasep_phase, tasep_riemann, TasepPhase};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Roundtrip,
    Diagonal,
    Rh,
    Consistency,
    Ecp,
    Phases,
    KmcRing,
    KmcRiemann,
    KmcOpen,
    Duality,
}

impl Suite {
    /// In acceptance order.
    pub const ALL: [Suite; 10] = [
        Suite::Roundtrip,
        Suite::Diagonal,
        Suite::Rh,
        Suite::Consistency,
        Suite::Ecp,
        Suite::Phases,
        Suite::KmcRing,
        Suite::KmcRiemann,
        Suite::KmcOpen,
        Suite::Duality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Roundtrip => "roundtrip",
            Suite::Diagonal => "diagonal",
            Suite::Rh => "rh",
            Suite::Consistency => "consistency",
            Suite::Ecp => "ecp",
            Suite::Phases => "phases",
            Suite::KmcRing => "kmc-ring",
            Suite::KmcRiemann => "kmc-riemann",
            Suite::KmcOpen => "kmc-open",
            Suite::Duality => "duality",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn description(self) -> &'static str {
        match self {
            Suite::Roundtrip => "z <-> rho roundtrip and implicit-relation residuals",
            Suite::Diagonal => "reduction to a single TASEP on the diagonal",
            Suite::Rh => "Rankine-Hugoniot determinant on shock lines",
            Suite::Consistency => "Riemann-variable consistency condition",
            Suite::Ecp => "scalar Riemann solution vs extremal current principle",
            Suite::Phases => "five-phase diagram in the z-domain",
            Suite::KmcRing => "ring simulation vs hydrodynamic currents",
            Suite::KmcRiemann => "step initial data simulation vs Riemann solver",
            Suite::KmcOpen => "open lattice simulation vs steady-state solver",
            Suite::Duality => "species/space duality covariance",
        }
    }

    /// Wall-clock budget, for the deterministic suites.
    pub fn budget(self) -> Option<Duration> {
        let secs = match self {
            Suite::Roundtrip | Suite::Duality => 5.0,
            Suite::Diagonal => 1.0,
            Suite::Rh | Suite::Consistency | Suite::Ecp => 2.0,
            Suite::Phases => 30.0,
            Suite::KmcRing | Suite::KmcRiemann | Suite::KmcOpen => return None,
        };
        Some(Duration::from_secs_f64(secs))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `value < tolerance`.
    pub fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance,
            passed: value < tolerance,
        }
    }

    /// Passes when `value >= minimum`.
    pub fn at_least(name: impl Into<String>, value: f64, minimum: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance: minimum,
            passed: value >= minimum,
        }
    }

    /// Passes when `value == expected`.
    pub fn equals(name: impl Into<String>, value: f64, expected: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance: expected,
            passed: value == expected,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub elapsed_secs: f64,
    pub budget_secs: Option<f64>,
    /// Set when the suite could not run to completion.
    pub error: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.error.is_none()
            && !self.checks.is_empty()
            && self.checks.iter().all(|c| c.passed)
            && self.budget_secs.map_or(true, |b| self.elapsed_secs < b)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

pub fn run_suite(suite: Suite) -> SuiteReport {
    let start = Instant::now();
    let result = match suite {
        Suite::Roundtrip => roundtrip(),
        Suite::Diagonal => diagonal(),
        Suite::Rh => rankine_hugoniot(),
        Suite::Consistency => consistency(),
        Suite::Ecp => scalar_equivalence(),
        Suite::Phases => five_phases(),
        Suite::KmcRing => kmc_ring(),
        Suite::KmcRiemann => kmc_riemann(),
        Suite::KmcOpen => kmc_open(),
        Suite::Duality => duality(),
    };
    let (checks, error) = match result {
        Ok(c) => (c, None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    SuiteReport {
        suite,
        checks,
        elapsed_secs: start.elapsed().as_secs_f64(),
        budget_secs: suite.budget().map(|b| b.as_secs_f64()),
        error,
    }
}

type Checks = crate::error::Result<Vec<Check>>;

pub mod oracle {
    //! Reference computations independent of the library's closed forms.

    use crate::hydro::{currents_from_rho, currents_from_z, rho_from_z, Densities, ModelParams, RiemannVars};

    /// Implicit density relations multiplied through by
    /// `z (z - 1) (z - rate)`.
    pub fn density_residuals(rho: Densities, z: RiemannVars, p: &ModelParams) -> (f64, f64) {
        let hole = 1.0 - rho.rho_circ - rho.rho_bullet;
        let rel = |own: f64, other: f64, z: f64, rate: f64| {
            own * (z - 1.0) * (z - rate) + other * z * (z - rate) + hole * z * (z - 1.0)
        };
        (
            rel(rho.rho_circ, rho.rho_bullet, z.z_alpha, p.alpha),
            rel(rho.rho_bullet, rho.rho_circ, z.z_beta, p.beta),
        )
    }

    /// Implicit current relations multiplied through by `z (z - 1) (z - rate)`.
    /// The constant term is `+1` for the alpha relation and `-1` for beta.
    pub fn current_residuals(j_circ: f64, j_bullet: f64, z: RiemannVars, p: &ModelParams) -> (f64, f64) {
        let rel = |own: f64, other: f64, z: f64, rate: f64, constant: f64| {
            own * (z - 1.0) * (z - rate) + other * z * (z - rate) - (own + other) * z * (z - 1.0)
                + constant * z * (z - 1.0) * (z - rate)
        };
        (
            rel(j_circ, j_bullet, z.z_alpha, p.alpha, 1.0),
            rel(j_bullet, j_circ, z.z_beta, p.beta, -1.0),
        )
    }

    /// Solves the implicit density relations for `z` by damped Newton
    /// iteration with a finite-difference Jacobian, from `start`.
    pub fn newton_z(rho: Densities, p: &ModelParams, start: RiemannVars) -> Option<RiemannVars> {
        let f = |z: RiemannVars| density_residuals(rho, z, p);
        let mut z = start;
        for _ in 0..200 {
            let (f0, f1) = f(z);
            if f0.abs().max(f1.abs()) < 1e-15 {
                return Some(z);
            }
            let h = 1e-7;
            let fa = f(RiemannVars::new(z.z_alpha + h, z.z_beta));
            let fb = f(RiemannVars::new(z.z_alpha, z.z_beta + h));
            // each relation involves only its own variable
            let d0 = (fa.0 - f0) / h;
            let d1 = (fb.1 - f1) / h;
            if d0 == 0.0 || d1 == 0.0 {
                return None;
            }
            let step = (f0 / d0, f1 / d1);
            z = RiemannVars::new(z.z_alpha - step.0, z.z_beta - step.1);
            if step.0.abs().max(step.1.abs()) < 1e-16 {
                return Some(z);
            }
        }
        let (f0, f1) = f(z);
        (f0.abs().max(f1.abs()) < 1e-13).then_some(z)
    }

    /// Current Jacobian `dJ_i / d rho_j` by central differences.
    pub fn current_jacobian(rho: Densities, p: &ModelParams, h: f64) -> Option<[[f64; 2]; 2]> {
        let j = |c: f64, b: f64| currents_from_rho(Densities::new(c, b), p).ok();
        let (pc, mc) = (j(rho.rho_circ + h, rho.rho_bullet)?, j(rho.rho_circ - h, rho.rho_bullet)?);
        let (pb, mb) = (j(rho.rho_circ, rho.rho_bullet + h)?, j(rho.rho_circ, rho.rho_bullet - h)?);
        Some([
            [(pc.j_circ - mc.j_circ) / (2.0 * h), (pb.j_circ - mb.j_circ) / (2.0 * h)],
            [(pc.j_bullet - mc.j_bullet) / (2.0 * h), (pb.j_bullet - mb.j_bullet) / (2.0 * h)],
        ])
    }

    /// Real eigenvalues of a 2x2 matrix, ascending.
    pub fn eigenvalues(m: [[f64; 2]; 2]) -> Option<(f64, f64)> {
        let tr = m[0][0] + m[1][1];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let disc = tr * tr / 4.0 - det;
        if disc < -1e-12 {
            return None;
        }
        let s = disc.max(0.0).sqrt();
        Some((tr / 2.0 - s, tr / 2.0 + s))
    }

    /// Eigenvalues through left and right eigenvectors: for each eigenvalue
    /// `lambda`, `l M r / l r` with `l`, `r` taken from the null spaces of
    /// `M - lambda`. Also returns the bi-orthogonality defect `|l_1 r_2|`.
    pub fn eigen_biorthogonal(m: [[f64; 2]; 2]) -> Option<((f64, f64), f64)> {
        let (l1, l2) = eigenvalues(m)?;
        let right = |lam: f64| {
            let (a, b) = (m[0][0] - lam, m[0][1]);
            let (c, d) = (m[1][0], m[1][1] - lam);
            if a.abs() + b.abs() >= c.abs() + d.abs() {
                [-b, a]
            } else {
                [-d, c]
            }
        };
        let left = |lam: f64| {
            let (a, c) = (m[0][0] - lam, m[1][0]);
            let (b, d) = (m[0][1], m[1][1] - lam);
            if a.abs() + c.abs() >= b.abs() + d.abs() {
                [-c, a]
            } else {
                [-d, b]
            }
        };
        let rayleigh = |l: [f64; 2], r: [f64; 2]| {
            let mr = [m[0][0] * r[0] + m[0][1] * r[1], m[1][0] * r[0] + m[1][1] * r[1]];
            (l[0] * mr[0] + l[1] * mr[1]) / (l[0] * r[0] + l[1] * r[1])
        };
        let norm = |v: [f64; 2]| (v[0] * v[0] + v[1] * v[1]).sqrt();
        let (r1, r2, lv1) = (right(l1), right(l2), left(l1));
        let defect = (lv1[0] * r2[0] + lv1[1] * r2[1]).abs() / (norm(lv1) * norm(r2));
        Some(((rayleigh(lv1, r1), rayleigh(left(l2), r2)), defect))
    }

    /// Characteristic speed of family `i` as `(dJ_k/dz_i) / (d rho_k/dz_i)`
    /// by finite differences in `z`, stepping inward near domain edges.
    pub fn z_speed(z: RiemannVars, p: &ModelParams, alpha_family: bool, h: f64) -> Option<f64> {
        let shift = |t: f64| {
            if alpha_family {
                RiemannVars::new(z.z_alpha + t, z.z_beta)
            } else {
                RiemannVars::new(z.z_alpha, z.z_beta + t)
            }
        };
        let eval = |t: f64| -> Option<(f64, f64)> {
            let zz = shift(t);
            let rho = rho_from_z(zz, p).ok()?;
            let j = currents_from_z(zz, p).ok()?;
            // alpha waves move circles, beta waves move bullets
            Some(if alpha_family { (rho.rho_circ, j.j_circ) } else { (rho.rho_bullet, j.j_bullet) })
        };
        let (lo, hi) = match (eval(-h), eval(h)) {
            (Some(a), Some(b)) => (a, b),
            (None, Some(b)) => (eval(0.0)?, b),
            (Some(a), None) => (a, eval(0.0)?),
            (None, None) => return None,
        };
        let dr = hi.0 - lo.0;
        (dr != 0.0).then(|| (hi.1 - lo.1) / dr)
    }
}

fn params(alpha: f64, beta: f64) -> ModelParams {
    ModelParams { alpha, beta }
}

fn interior_grid(p: &ModelParams, n: usize) -> impl Iterator<Item = RiemannVars> + '_ {
    (0..n * n).filter_map(move |k| {
        let a = p.z_alpha_max() * ((k % n) as f64 + 0.5) / n as f64;
        let b = p.z_beta_max() * ((k / n) as f64 + 0.5) / n as f64;
        (a + b < 1.0).then_some(RiemannVars::new(a, b))
    })
}

/// Uniform sample of the domain interior, at least `margin` from its edges.
fn random_z(rng: &mut ChaCha8Rng, p: &ModelParams, margin: f64) -> RiemannVars {
    loop {
        let a = rng.random_range(margin..p.z_alpha_max() - margin);
        let b = rng.random_range(margin..p.z_beta_max() - margin);
        if a + b < 1.0 - margin {
            return RiemannVars::new(a, b);
        }
    }
}

fn roundtrip() -> Checks {
    let mut checks = Vec::new();
    for p in [params(0.8, 0.9), params(0.5, 0.5), params(1.0, 1.0), params(1.5, 0.7)] {
        let (mut rt, mut rho_res, mut j_res) = (0.0f64, 0.0f64, 0.0f64);
        for z in interior_grid(&p, 100) {
            let rho = rho_from_z(z, &p)?;
            rt = rt.max(z_from_rho(rho, &p)?.max_abs_diff(&z));
            let r = oracle::density_residuals(rho, z, &p);
            rho_res = rho_res.max(r.0.abs()).max(r.1.abs());
            let j = currents_from_z(z, &p)?;
            let r = oracle::current_residuals(j.j_circ, j.j_bullet, z, &p);
            j_res = j_res.max(r.0.abs()).max(r.1.abs());
        }
        let tag = format!("alpha={} beta={}", p.alpha, p.beta);
        checks.push(Check::below(format!("{tag}: roundtrip max error"), rt, 1e-9));
        checks.push(Check::below(format!("{tag}: density relation residual"), rho_res, 1e-10));
        checks.push(Check::below(format!("{tag}: current relation residual"), j_res, 1e-10));
    }
    Ok(checks)
}

fn diagonal() -> Checks {
    let p = params(0.8, 0.9);
    let (mut va, mut vb, mut jb, mut jc) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    // the anti-diagonal enters the domain at z_beta = z_beta_max
    let (lo, hi) = (1.0 - p.z_beta_max(), p.z_alpha_max());
    for k in 0..200 {
        let a = lo + (hi - lo) * (k as f64 + 0.5) / 200.0;
        let z = RiemannVars::new(a, 1.0 - a);
        let v = char_velocities(z, &p)?;
        let j = currents_from_z(z, &p)?;
        va = va.max((v.v_alpha - (2.0 * a - 1.0)).abs());
        vb = vb.max((v.v_beta - (2.0 * a - 1.0)).abs());
        jb = jb.max((j.j_bullet - z.z_beta * (1.0 - z.z_beta)).abs());
        jc = jc.max((j.j_circ + z.z_alpha * (1.0 - z.z_alpha)).abs());
    }
    Ok(vec![
        Check::below("|v_alpha - (2 z_alpha - 1)|", va, 1e-10),
        Check::below("|v_beta - (2 z_alpha - 1)|", vb, 1e-10),
        Check::below("|J_bullet - z_beta (1 - z_beta)|", jb, 1e-10),
        Check::below("|J_circ + z_alpha (1 - z_alpha)|", jc, 1e-10),
    ])
}

fn rankine_hugoniot() -> Checks {
    let p = params(0.8, 0.9);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = [0.0f64; 2];
    for (family, slot) in [(true, 0), (false, 1)] {
        for _ in 0..1000 {
            let z1 = random_z(&mut rng, &p, 1e-3);
            // second state on the same line, inside the domain
            let z2 = if family {
                let top = p.z_beta_max().min(1.0 - z1.z_alpha);
                RiemannVars::new(z1.z_alpha, rng.random_range(0.0..top))
            } else {
                let top = p.z_alpha_max().min(1.0 - z1.z_beta);
                RiemannVars::new(rng.random_range(0.0..top), z1.z_beta)
            };
            let (r1, r2) = (rho_from_z(z1, &p)?, rho_from_z(z2, &p)?);
            let (j1, j2) = (currents_from_z(z1, &p)?, currents_from_z(z2, &p)?);
            let det = (r2.rho_bullet - r1.rho_bullet) * (j2.j_circ - j1.j_circ)
                - (r2.rho_circ - r1.rho_circ) * (j2.j_bullet - j1.j_bullet);
            worst[slot] = worst[slot].max(det.abs());
        }
    }
    Ok(vec![
        Check::below("constant z_alpha pairs: |det|", worst[0], 1e-9),
        Check::below("constant z_beta pairs: |det|", worst[1], 1e-9),
    ])
}

fn consistency() -> Checks {
    let p = params(0.8, 0.9);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let h = 1e-6;
    let mut worst = [0.0f64; 2];
    for _ in 0..500 {
        let z = random_z(&mut rng, &p, 0.02);
        for (i, slot) in worst.iter_mut().enumerate() {
            let shift = |t: f64| {
                if i == 0 {
                    RiemannVars::new(z.z_alpha + t, z.z_beta)
                } else {
                    RiemannVars::new(z.z_alpha, z.z_beta + t)
                }
            };
            let (rp, rm) = (rho_from_z(shift(h), &p)?, rho_from_z(shift(-h), &p)?);
            let (jp, jm) = (currents_from_z(shift(h), &p)?, currents_from_z(shift(-h), &p)?);
            let d = |a: f64, b: f64| (a - b) / (2.0 * h);
            let lhs = d(jp.j_bullet, jm.j_bullet) * d(rp.rho_circ, rm.rho_circ);
            let rhs = d(jp.j_circ, jm.j_circ) * d(rp.rho_bullet, rm.rho_bullet);
            let scale = lhs.abs().max(rhs.abs());
            if scale > 1e-8 {
                *slot = slot.max((lhs - rhs).abs() / scale);
            }
        }
    }
    Ok(vec![
        Check::below("derivatives along z_alpha: relative error", worst[0], 1e-5),
        Check::below("derivatives along z_beta: relative error", worst[1], 1e-5),
    ])
}

/// Phase layout of the open scalar TASEP drawn directly in the
/// `(rho_left, rho_right)` square.
fn tasep_layout(l: f64, r: f64) -> TasepPhase {
    if l < 0.5 && l + r < 1.0 {
        TasepPhase::LeftInduced
    } else if r > 0.5 && l + r > 1.0 {
        TasepPhase::RightInduced
    } else {
        TasepPhase::BulkInduced
    }
}

fn scalar_equivalence() -> Checks {
    // offsets keep the grid off rho = 1/2 and rho_left + rho_right = 1
    let mut mismatches = 0;
    for i in 0..50 {
        for j in 0..50 {
            let (l, r) = ((i as f64 + 0.25) / 50.0, (j as f64 + 0.6) / 50.0);
            if tasep_current(tasep_riemann(l, r, 0.0)) != extremal_current(l, r) {
                mismatches += 1;
            }
        }
    }
    let mut layout_errors = 0;
    for i in 0..100 {
        for j in 0..100 {
            let (l, r) = ((i as f64 + 0.5) / 100.0, (j as f64 + 0.5) / 100.0);
            if (l + r - 1.0).abs() < 1e-12 {
                continue;
            }
            if tasep_phase(l, r) != tasep_layout(l, r) {
                layout_errors += 1;
            }
        }
    }
    Ok(vec![
        Check::equals("grid pairs where J(R0) != extremal current (of 2500)", mismatches as f64, 0.0),
        Check::equals("cells off the three-region layout at resolution 0.01", layout_errors as f64, 0.0),
    ])
}

fn five_phases() -> Checks {
    let p = params(0.8, 0.9);
    let n = 400;
    let grid = phase_diagram_z(&p, n, DEFAULT_V_TOL)?;
    let regions = grid.regions();
    let labels: Vec<Phase> = regions.iter().map(|r| r.0).collect();
    let all_labels = Phase::ALLOWED.iter().all(|p| labels.contains(p));

    // bulk-induced bands against zero crossings of independently computed speeds
    let h = 1e-7;
    let banded = |k: usize, alpha: bool| {
        grid.cells[k].is_some_and(|c| {
            let ind = if alpha { c.induction_alpha } else { c.induction_beta };
            ind == Induction::BulkInduced
        })
    };
    let z_at = |k: usize| RiemannVars::new(grid.z_alpha[k % n], grid.z_beta[k / n]);
    let mut missed = 0usize;
    let mut crossings = 0usize;
    let mut near_root = vec![[false; 2]; n * n];
    for family in [true, false] {
        let speed = |z: RiemannVars| oracle::z_speed(z, &p, family, h);
        for line in 0..n {
            for step in 0..n - 1 {
                // scan rows for the alpha family and columns for beta
                let (k0, k1) = if family {
                    (line * n + step, line * n + step + 1)
                } else {
                    (step * n + line, (step + 1) * n + line)
                };
                if grid.cells[k0].is_none() || grid.cells[k1].is_none() {
                    continue;
                }
                let (z0, z1) = (z_at(k0), z_at(k1));
                let (Some(v0), Some(v1)) = (speed(z0), speed(z1)) else { continue };
                if v0.signum() == v1.signum() || v0 == 0.0 || v1 == 0.0 {
                    continue;
                }
                crossings += 1;
                let slot = if family { 0 } else { 1 };
                near_root[k0][slot] = true;
                near_root[k1][slot] = true;
                if !(banded(k0, family) || banded(k1, family)) {
                    missed += 1;
                }
            }
        }
    }
    // every banded cell must be within one cell of a crossing along some line
    let near = |k: usize, slot: usize| {
        let (i, j) = ((k % n) as i64, (k / n) as i64);
        (-1..=1).any(|di| {
            (-1..=1).any(|dj| {
                let (ii, jj) = (i + di, j + dj);
                ii >= 0 && jj >= 0 && ii < n as i64 && jj < n as i64 && near_root[(jj * n as i64 + ii) as usize][slot]
            })
        })
    };
    let mut stray = 0usize;
    for k in 0..n * n {
        let Some(cell) = grid.cells[k] else { continue };
        if cell.is_degenerate() {
            continue;
        }
        if cell.induction_alpha == Induction::BulkInduced && !near(k, 0) {
            stray += 1;
        }
        if cell.induction_beta == Induction::BulkInduced && !near(k, 1) {
            stray += 1;
        }
    }
    Ok(vec![
        Check::equals("connected phase regions", regions.len() as f64, 5.0),
        Check::equals("all five labels present", all_labels as u8 as f64, 1.0),
        Check::equals("sign changes without a bulk-induced cell", missed as f64, 0.0),
        Check::equals("bulk-induced cells away from any sign change", stray as f64, 0.0),
        Check::at_least("sign changes found along grid lines", crossings as f64, 1.0),
    ])
}

fn kmc_ring() -> Checks {
    let p = params(0.8, 0.9);
    let mut checks = Vec::new();
    for (k, rho) in [Densities::new(0.3, 0.4), Densities::new(0.1, 0.2), Densities::new(0.5, 0.3)]
        .into_iter()
        .enumerate()
    {
        let m = kmc::run(&SimConfig::ring(2000, p, rho, 100 + k as u64))?;
        let j = currents_from_rho(rho, &p)?;
        let tag = format!("rho=({}, {})", rho.rho_circ, rho.rho_bullet);
        checks.push(Check::below(
            format!("{tag}: J_circ {:.5} +- {:.5} vs {:.5}, rel. error", m.j_circ.mean, m.j_circ.std_err, j.j_circ),
            (m.j_circ.mean / j.j_circ - 1.0).abs(),
            0.02,
        ));
        checks.push(Check::below(
            format!("{tag}: J_bullet {:.5} +- {:.5} vs {:.5}, rel. error", m.j_bullet.mean, m.j_bullet.std_err, j.j_bullet),
            (m.j_bullet.mean / j.j_bullet - 1.0).abs(),
            0.02,
        ));
    }
    Ok(checks)
}

/// Smoothing window, in sites, applied equally to simulation and prediction.
pub const RIEMANN_WINDOW: usize = 160;
/// Each replica is also read at nine times spread over [0.9 t, 1.1 t] and
/// rescaled along rays, which thins the noise without moving the fan edges.
pub const RIEMANN_SNAPSHOTS: usize = 9;
pub const RIEMANN_SPREAD: f64 = 0.2;

fn kmc_riemann() -> Checks {
    let p = params(0.8, 0.9);
    let (t, l) = (800.0, 4000);
    let generic = (rho_from_z(RiemannVars::new(0.15, 0.45), &p)?, rho_from_z(RiemannVars::new(0.45, 0.15), &p)?);
    let cases = [
        ("diagonal", Densities::new(0.2, 0.8), Densities::new(0.7, 0.3)),
        ("generic", generic.0, generic.1),
    ];
    let mut checks = Vec::new();
    for (k, (name, rho_left, rho_right)) in cases.into_iter().enumerate() {
        let run = StepRunConfig {
            rho_left,
            rho_right,
            params: p,
            length: l,
            time: t,
            seed: 500 + k as u64,
        };
        let prof = kmc::step_ensemble(&StepEnsemble {
            run,
            replicas: 20,
            snapshots: RIEMANN_SNAPSHOTS,
            spread: RIEMANN_SPREAD,
        })?;
        let sol = solve_riemann(RiemannData::from_densities(rho_left, rho_right, p)?)?;
        let (lo, hi) = match (sol.waves.first(), sol.waves.last()) {
            (Some(f), Some(l)) => (f.speed_lo * t, l.speed_hi * t),
            _ => (0.0, 0.0),
        };
        let (a, b) = (lo + 0.1 * (hi - lo), hi - 0.1 * (hi - lo));
        let mut pred_c = Vec::with_capacity(l);
        let mut pred_b = Vec::with_capacity(l);
        for x in &prof.positions {
            let rho = rho_from_z(eval_solution(&sol, x / t)?, &p)?;
            pred_c.push(rho.rho_circ);
            pred_b.push(rho.rho_bullet);
        }
        let smooth = |v: &[f64]| window_average(v, RIEMANN_WINDOW);
        let (sc, sb, pc, pb) = (smooth(&prof.rho_circ), smooth(&prof.rho_bullet), smooth(&pred_c), smooth(&pred_b));
        let (mut dc, mut db) = (0.0f64, 0.0f64);
        for (i, x) in prof.positions.iter().enumerate() {
            if *x >= a && *x <= b {
                dc = dc.max((sc[i] - pc[i]).abs());
                db = db.max((sb[i] - pb[i]).abs());
            }
        }
        let tag = format!("{name} ({})", sol.scenario());
        checks.push(Check::equals(format!("{tag}: waves stay clear of the seam"), prof.wave_reached_edge as u8 as f64, 0.0));
        checks.push(Check::below(format!("{tag}: sup |rho_circ - prediction|"), dc, 0.03));
        checks.push(Check::below(format!("{tag}: sup |rho_bullet - prediction|"), db, 0.03));
    }
    Ok(checks)
}

/// The four random reservoir configurations used by the open-lattice suite.
pub fn random_rate_sets(count: usize, seed: u64) -> Vec<BoundaryRates> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut v = [0.0; 6];
            v.iter_mut().for_each(|x| *x = rng.random_range(0.1..1.0));
            BoundaryRates {
                nu_bullet_star_l: v[0],
                nu_star_circ_l: v[1],
                nu_bullet_circ_l: v[2],
                nu_bullet_star_r: v[3],
                nu_star_circ_r: v[4],
                nu_bullet_circ_r: v[5],
            }
        })
        .collect()
}

fn kmc_open() -> Checks {
    let p = params(0.8, 0.9);
    let l = 500;
    let mut sets = vec![BoundaryRates::uniform(0.5)];
    sets.extend(random_rate_sets(4, 2024));
    let mut checks = Vec::new();
    for (k, rates) in sets.into_iter().enumerate() {
        let tag = if k == 0 { "all rates 0.5".to_string() } else { format!("random set {k}") };
        let s = match solve_steady_state(&rates, &p, &SolverConfig::default()) {
            Ok(s) => s,
            Err(e) => {
                checks.push(Check::below(format!("{tag}: solver failed ({e})"), f64::INFINITY, 1e-8));
                continue;
            }
        };
        checks.push(Check::below(format!("{tag} [{}]: solver residual", s.phase), s.residual, 1e-8));
        let m = kmc::run(&SimConfig::open(l, p, rates, 900 + k as u64))?;
        let bulk = m.mean_density(2 * l / 5, 3 * l / 5);
        checks.push(Check::below(format!("{tag}: bulk density deviation"), bulk.max_abs_diff(&s.rho_bulk), 0.02));
        checks.push(Check::below(format!("{tag}: first-site density deviation"), m.rho_site1.max_abs_diff(&s.rho_left), 0.03));
        checks.push(Check::below(format!("{tag}: last-site density deviation"), m.rho_site_l.max_abs_diff(&s.rho_right), 0.03));
    }
    Ok(checks)
}

fn duality() -> Checks {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut d_rho, mut d_j, mut d_v, mut d_sigma) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..500 {
        let p = params(rng.random_range(0.2..2.0), rng.random_range(0.2..2.0));
        let z = random_z(&mut rng, &p, 1e-3);
        let (pd, zd) = (p.dual(), z.swapped());
        let (rho, rho_d) = (rho_from_z(z, &p)?, rho_from_z(zd, &pd)?);
        d_rho = d_rho.max(rho_d.max_abs_diff(&rho.swapped()));
        let (j, j_d) = (currents_from_z(z, &p)?, currents_from_z(zd, &pd)?);
        // mirror: circles become bullets and right becomes left
        d_j = d_j.max((j_d.j_circ + j.j_bullet).abs()).max((j_d.j_bullet + j.j_circ).abs());
        let (v, v_d) = (char_velocities(z, &p)?, char_velocities(zd, &pd)?);
        d_v = d_v.max((v_d.v_alpha + v.v_beta).abs()).max((v_d.v_beta + v.v_alpha).abs());
        // an alpha shock from z to a state with smaller z_alpha
        let z_plus = RiemannVars::new(rng.random_range(0.0..z.z_alpha), z.z_beta);
        let sigma = shock_speed(WaveFamily::AlphaShock, z, z_plus, &p)?;
        let sigma_d = shock_speed(WaveFamily::BetaShock, z_plus.swapped(), zd, &pd)?;
        d_sigma = d_sigma.max((sigma + sigma_d).abs());
    }
    // non-converged runs are compared through their best iterates; the
    // iteration cap only keeps those cheap
    let cfg = SolverConfig {
        max_iterations: 10_000,
        ..SolverConfig::default()
    };
    let mirror_side = |side: &str| if side == "left" { "right" } else { "left" };
    let mut d_steady = 0.0f64;
    let mut matched = 0;
    for rates in random_rate_sets(100, 11) {
        let p = params(rng.random_range(0.3..1.5), rng.random_range(0.3..1.5));
        let outcome = |r: &BoundaryRates, p: &ModelParams| match solve_steady_state(r, p, &cfg) {
            Ok(s) => Ok(s),
            Err(Error::NonConvergence { best }) => Ok(*best),
            Err(e) => Err(e),
        };
        match (outcome(&rates, &p), outcome(&rates.dual(), &p.dual())) {
            (Ok(s), Ok(sd)) => {
                d_steady = d_steady
                    .max(sd.rho_left.max_abs_diff(&s.rho_right.swapped()))
                    .max(sd.rho_right.max_abs_diff(&s.rho_left.swapped()))
                    .max(sd.rho_bulk.max_abs_diff(&s.rho_bulk.swapped()))
                    .max(sd.currents.max_abs_diff(&s.currents.dual()));
                if sd.phase == s.phase.dual() && sd.converged == s.converged {
                    matched += 1;
                }
            }
            (
                Err(Error::InfeasibleCurrent { side, j_circ, j_bullet, distance }),
                Err(Error::InfeasibleCurrent { side: sd, j_circ: jc, j_bullet: jb, distance: dd }),
            ) => {
                d_steady = d_steady
                    .max((jc + j_bullet).abs())
                    .max((jb + j_circ).abs())
                    .max((dd - distance).abs());
                if sd == mirror_side(side) {
                    matched += 1;
                }
            }
            _ => {}
        }
    }
    Ok(vec![
        Check::below("densities", d_rho, 1e-8),
        Check::below("currents", d_j, 1e-8),
        Check::below("characteristic velocities", d_v, 1e-8),
        Check::below("shock speeds", d_sigma, 1e-8),
        Check::below("steady states (densities, currents, phase)", d_steady, 1e-8),
        Check::equals("steady-state outcomes mirrored (of 100)", matched as f64, 100.0),
    ])
}
