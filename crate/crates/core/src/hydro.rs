//! Exact hydrodynamics of the two-species TASEP.
//!
//! Bullets (`•`) hop right into holes at rate `beta`, circles (`◦`) hop left
//! into holes at rate `alpha`, and a `•◦` pair swaps at rate 1. The uniform
//! stationary states are labelled either by the densities
//! `(rho_circ, rho_bullet)` or by the Riemann variables `(z_alpha, z_beta)`,
//! which are the roots of
//!
//! ```text
//! alpha (1 - z_alpha) rho_circ  + (1 - alpha) z_alpha rho_bullet = z_alpha (1 - z_alpha)
//! beta  (1 - z_beta)  rho_bullet + (1 - beta)  z_beta  rho_circ  = z_beta  (1 - z_beta)
//! ```
//!
//! Both equations are linear in the densities, so fixing one Riemann
//! variable traces a straight line in density space. Those lines are
//! simultaneously the shock and rarefaction curves of the system.
//!
//! The physical z-domain is `0 <= z_alpha <= min(1, alpha)`,
//! `0 <= z_beta <= min(1, beta)`, `z_alpha + z_beta <= 1`. On its diagonal
//! edge `z_alpha + z_beta = 1` there are no holes, the map to densities is the
//! identity and the dynamics reduces to a single TASEP.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inputs this close outside a constraint are clamped onto it.
pub const DOMAIN_TOL: f64 = 1e-12;

/// Density derivatives smaller than this are treated as vanishing.
const DERIVATIVE_TOL: f64 = 1e-12;

/// Relative size below which the inversion denominator counts as zero.
const SINGULAR_TOL: f64 = 1e-13;

/// Rounding slack accepted on computed densities before they are clamped.
const OUTPUT_SLACK: f64 = 1e-9;

/// Steps used for one-sided Richardson limits.
const RICHARDSON_STEP: f64 = 1e-5;

/// Bulk swap rates. The `•◦` exchange rate is fixed to one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub alpha: f64,
    pub beta: f64,
}

impl ModelParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let p = Self { alpha, beta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::InvalidParams(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::InvalidParams(format!("beta must be positive, got {}", self.beta)));
        }
        Ok(())
    }

    /// Upper bound of `z_alpha` on the physical domain.
    pub fn z_alpha_max(&self) -> f64 {
        self.alpha.min(1.0)
    }

    pub fn z_beta_max(&self) -> f64 {
        self.beta.min(1.0)
    }

    /// Parameters of the mirror model (species exchanged, space reflected).
    pub fn dual(&self) -> Self {
        Self {
            alpha: self.beta,
            beta: self.alpha,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Densities {
    pub rho_circ: f64,
    pub rho_bullet: f64,
}

impl Densities {
    pub const fn new(rho_circ: f64, rho_bullet: f64) -> Self {
        Self { rho_circ, rho_bullet }
    }

    /// Hole density.
    pub fn rho_star(&self) -> f64 {
        1.0 - self.rho_circ - self.rho_bullet
    }

    /// Largest violation of the simplex constraints (zero inside).
    pub fn simplex_violation(&self) -> f64 {
        (-self.rho_circ)
            .max(-self.rho_bullet)
            .max(self.rho_circ + self.rho_bullet - 1.0)
            .max(0.0)
    }

    /// Returns the densities clamped onto the simplex if they violate it by
    /// at most [`DOMAIN_TOL`], and a domain error otherwise.
    pub fn checked(self) -> Result<Self> {
        self.checked_with(DOMAIN_TOL)
    }

    fn checked_with(self, tol: f64) -> Result<Self> {
        if !(self.rho_circ.is_finite() && self.rho_bullet.is_finite()) {
            return Err(Error::Domain(format!("non-finite densities {self:?}")));
        }
        let violation = self.simplex_violation();
        if violation > tol {
            return Err(Error::Domain(format!(
                "densities ({}, {}) violate the simplex by {violation:.3e}",
                self.rho_circ, self.rho_bullet
            )));
        }
        Ok(self.project_to_simplex())
    }

    /// Euclidean projection onto `{rho >= 0, rho_circ + rho_bullet <= 1}`.
    pub fn project_to_simplex(self) -> Self {
        let mut c = self.rho_circ.max(0.0);
        let mut b = self.rho_bullet.max(0.0);
        let excess = c + b - 1.0;
        if excess > 0.0 {
            c -= 0.5 * excess;
            b -= 0.5 * excess;
            if c < 0.0 {
                b = 1.0;
                c = 0.0;
            } else if b < 0.0 {
                c = 1.0;
                b = 0.0;
            }
        }
        Self::new(c, b)
    }

    /// Species exchange `(rho_circ, rho_bullet) -> (rho_bullet, rho_circ)`.
    pub fn swapped(&self) -> Self {
        Self::new(self.rho_bullet, self.rho_circ)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.rho_circ - other.rho_circ)
            .abs()
            .max((self.rho_bullet - other.rho_bullet).abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RiemannVars {
    pub z_alpha: f64,
    pub z_beta: f64,
}

impl RiemannVars {
    pub const fn new(z_alpha: f64, z_beta: f64) -> Self {
        Self { z_alpha, z_beta }
    }

    pub fn on_diagonal(&self, tol: f64) -> bool {
        (1.0 - self.z_alpha - self.z_beta).abs() <= tol
    }

    /// Clamps onto the physical domain of `p` within [`DOMAIN_TOL`].
    pub fn checked(self, p: &ModelParams) -> Result<Self> {
        if !in_physical_domain(self, p, DOMAIN_TOL) {
            return Err(Error::Domain(format!(
                "z = ({}, {}) for alpha = {}, beta = {}",
                self.z_alpha, self.z_beta, p.alpha, p.beta
            )));
        }
        let a = self.z_alpha.clamp(0.0, p.z_alpha_max());
        let mut b = self.z_beta.clamp(0.0, p.z_beta_max());
        if a + b > 1.0 {
            b = 1.0 - a;
        }
        Ok(Self::new(a, b))
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.z_beta, self.z_alpha)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.z_alpha - other.z_alpha)
            .abs()
            .max((self.z_beta - other.z_beta).abs())
    }
}

/// Species currents, positive to the right.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Currents {
    pub j_circ: f64,
    pub j_bullet: f64,
}

impl Currents {
    pub const fn new(j_circ: f64, j_bullet: f64) -> Self {
        Self { j_circ, j_bullet }
    }

    /// Currents seen in the mirror model: `(j_circ, j_bullet) -> (-j_bullet, -j_circ)`.
    pub fn dual(&self) -> Self {
        Self::new(-self.j_bullet, -self.j_circ)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.j_circ - other.j_circ)
            .abs()
            .max((self.j_bullet - other.j_bullet).abs())
    }
}

/// Characteristic velocities, ordered `v_alpha <= v_beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharVelocities {
    pub v_alpha: f64,
    pub v_beta: f64,
}

/// True iff the three domain inequalities hold within `tol`.
pub fn in_physical_domain(z: RiemannVars, p: &ModelParams, tol: f64) -> bool {
    z.z_alpha.is_finite()
        && z.z_beta.is_finite()
        && z.z_alpha >= -tol
        && z.z_beta >= -tol
        && z.z_alpha <= p.z_alpha_max() + tol
        && z.z_beta <= p.z_beta_max() + tol
        && z.z_alpha + z.z_beta <= 1.0 + tol
}

/// Smaller root of each quadratic density relation.
pub fn z_from_rho(rho: Densities, p: &ModelParams) -> Result<RiemannVars> {
    p.validate()?;
    let rho = rho.checked()?;
    let (c, b) = (rho.rho_circ, rho.rho_bullet);
    let z_alpha = smaller_root(1.0 - b + p.alpha * (c + b), p.alpha * c);
    let z_beta = smaller_root(1.0 - c + p.beta * (c + b), p.beta * b);
    let z = RiemannVars::new(z_alpha, z_beta);
    debug_assert!(
        {
            let (ra, rb) = density_relation_residual(rho, z, p);
            ra.abs().max(rb.abs()) < 1e-9
        },
        "density relations violated at rho = {rho:?}, z = {z:?}"
    );
    z.checked(p)
}

/// `(s - sqrt(s^2 - 4 q)) / 2` written without the cancellation.
fn smaller_root(s: f64, q: f64) -> f64 {
    if q <= 0.0 {
        return 0.0;
    }
    let disc = (s * s - 4.0 * q).max(0.0);
    2.0 * q / (s + disc.sqrt())
}

/// Residuals of the two linear density relations at `(rho, z)`.
pub fn density_relation_residual(rho: Densities, z: RiemannVars, p: &ModelParams) -> (f64, f64) {
    let (a, b) = (z.z_alpha, z.z_beta);
    let (c, u) = (rho.rho_circ, rho.rho_bullet);
    (
        p.alpha * (1.0 - a) * c + (1.0 - p.alpha) * a * u - a * (1.0 - a),
        p.beta * (1.0 - b) * u + (1.0 - p.beta) * b * c - b * (1.0 - b),
    )
}

/// Residuals of the linear current relations at `(j, z)`.
pub fn current_relation_residual(j: Currents, z: RiemannVars, p: &ModelParams) -> (f64, f64) {
    let (a, b) = (z.z_alpha, z.z_beta);
    (
        p.alpha * (1.0 - a) * j.j_circ + (1.0 - p.alpha) * a * j.j_bullet - a * (1.0 - a) * (a - p.alpha),
        p.beta * (1.0 - b) * j.j_bullet + (1.0 - p.beta) * b * j.j_circ + b * (1.0 - b) * (b - p.beta),
    )
}

/// Common denominator of the inverse map.
fn denominator(a: f64, b: f64, p: &ModelParams) -> f64 {
    p.alpha * p.beta * (1.0 - a) * (1.0 - b) - (1.0 - p.alpha) * (1.0 - p.beta) * a * b
}

fn denominator_scale(p: &ModelParams) -> f64 {
    p.alpha * p.beta + ((1.0 - p.alpha) * (1.0 - p.beta)).abs()
}

fn nonsingular_denominator(a: f64, b: f64, p: &ModelParams) -> Result<f64> {
    let d = denominator(a, b, p);
    if d.abs() <= SINGULAR_TOL * denominator_scale(p) {
        return Err(Error::SingularDenominator { z_alpha: a, z_beta: b });
    }
    Ok(d)
}

fn numerator_circ(a: f64, b: f64, p: &ModelParams) -> f64 {
    a * (1.0 - b) * (p.beta * (1.0 - a) - (1.0 - p.alpha) * b)
}

fn numerator_bullet(a: f64, b: f64, p: &ModelParams) -> f64 {
    b * (1.0 - a) * (p.alpha * (1.0 - b) - (1.0 - p.beta) * a)
}

/// Inverse of [`z_from_rho`].
pub fn rho_from_z(z: RiemannVars, p: &ModelParams) -> Result<Densities> {
    p.validate()?;
    let z = z.checked(p)?;
    if z.on_diagonal(DOMAIN_TOL) {
        return Ok(Densities::new(z.z_alpha, z.z_beta));
    }
    let (a, b) = (z.z_alpha, z.z_beta);
    let d = nonsingular_denominator(a, b, p)?;
    let rho = Densities::new(numerator_circ(a, b, p) / d, numerator_bullet(a, b, p) / d);
    rho.checked_with(OUTPUT_SLACK)
}

/// Partial derivatives `[[d rho_circ/d z_alpha, d rho_circ/d z_beta],
/// [d rho_bullet/d z_alpha, d rho_bullet/d z_beta]]`.
pub fn density_jacobian(z: RiemannVars, p: &ModelParams) -> Result<[[f64; 2]; 2]> {
    let z = z.checked(p)?;
    let (a, b) = (z.z_alpha, z.z_beta);
    let (al, be) = (p.alpha, p.beta);
    let d = nonsingular_denominator(a, b, p)?;
    let cross = (1.0 - al) * (1.0 - be);
    let d_a = -al * be * (1.0 - b) - cross * b;
    let d_b = -al * be * (1.0 - a) - cross * a;

    let nc = numerator_circ(a, b, p);
    let nc_a = (1.0 - b) * (be * (1.0 - 2.0 * a) - (1.0 - al) * b);
    let nc_b = -a * (be * (1.0 - a) + (1.0 - al) * (1.0 - 2.0 * b));

    let nb = numerator_bullet(a, b, p);
    let nb_b = (1.0 - a) * (al * (1.0 - 2.0 * b) - (1.0 - be) * a);
    let nb_a = -b * (al * (1.0 - b) + (1.0 - be) * (1.0 - 2.0 * a));

    let d2 = d * d;
    Ok([
        [(nc_a * d - nc * d_a) / d2, (nc_b * d - nc * d_b) / d2],
        [(nb_a * d - nb * d_a) / d2, (nb_b * d - nb * d_b) / d2],
    ])
}

/// Currents as explicit rational functions of the Riemann variables.
pub fn currents_from_z(z: RiemannVars, p: &ModelParams) -> Result<Currents> {
    p.validate()?;
    let z = z.checked(p)?;
    let (a, b) = (z.z_alpha, z.z_beta);
    if z.on_diagonal(DOMAIN_TOL) {
        return Ok(Currents::new(-a * (1.0 - a), b * (1.0 - b)));
    }
    let (al, be) = (p.alpha, p.beta);
    let d = nonsingular_denominator(a, b, p)?;
    let j_circ = a * (b - 1.0) * (be * (a - 1.0) * (a - al) - (al - 1.0) * be * b + (al - 1.0) * b * b) / d;
    let j_bullet = -(a - 1.0) * b * (al * (b - 1.0) * (b - be) - (be - 1.0) * al * a + (be - 1.0) * a * a) / d;
    Ok(Currents::new(j_circ, j_bullet))
}

pub fn currents_from_rho(rho: Densities, p: &ModelParams) -> Result<Currents> {
    currents_from_z(z_from_rho(rho, p)?, p)
}

/// Characteristic velocities, the eigenvalues of the current Jacobian
/// `d J_i / d rho_j`.
pub fn char_velocities(z: RiemannVars, p: &ModelParams) -> Result<CharVelocities> {
    p.validate()?;
    let z = z.checked(p)?;
    if z.on_diagonal(DOMAIN_TOL) {
        let v = 2.0 * z.z_alpha - 1.0;
        return Ok(CharVelocities { v_alpha: v, v_beta: v });
    }
    match interior_velocities(z, p) {
        Ok(v) => Ok(v),
        Err(Error::DegenerateDerivative { .. }) | Err(Error::SingularDenominator { .. }) => {
            richardson_velocities(z, p)
        }
        Err(e) => Err(e),
    }
}

fn interior_velocities(z: RiemannVars, p: &ModelParams) -> Result<CharVelocities> {
    let (a, b) = (z.z_alpha, z.z_beta);
    let rho = rho_from_z(z, p)?;
    let jac = density_jacobian(z, p)?;
    let degenerate = || Error::DegenerateDerivative { z_alpha: a, z_beta: b };

    let v_alpha = if jac[0][0].abs() > DERIVATIVE_TOL {
        a - b + (rho.rho_circ + b - 1.0) / jac[0][0]
    } else if jac[1][0].abs() > DERIVATIVE_TOL {
        a - b + (rho.rho_bullet - b) / jac[1][0]
    } else {
        return Err(degenerate());
    };
    let v_beta = if jac[1][1].abs() > DERIVATIVE_TOL {
        a - b + (1.0 - a - rho.rho_bullet) / jac[1][1]
    } else if jac[0][1].abs() > DERIVATIVE_TOL {
        a - b + (a - rho.rho_circ) / jac[0][1]
    } else {
        return Err(degenerate());
    };
    Ok(CharVelocities { v_alpha, v_beta })
}

/// One-sided limit `2 f(h/2) - f(h)` approached from the domain interior.
fn richardson_velocities(z: RiemannVars, p: &ModelParams) -> Result<CharVelocities> {
    let centre = RiemannVars::new(p.z_alpha_max() / 3.0, p.z_beta_max() / 3.0);
    let (da, db) = (centre.z_alpha - z.z_alpha, centre.z_beta - z.z_beta);
    let norm = da.hypot(db);
    if norm == 0.0 {
        return Err(Error::DegenerateDerivative { z_alpha: z.z_alpha, z_beta: z.z_beta });
    }
    let at = |h: f64| {
        let shifted = RiemannVars::new(z.z_alpha + h * da / norm, z.z_beta + h * db / norm);
        interior_velocities(shifted, p)
    };
    let coarse = at(RICHARDSON_STEP)?;
    let fine = at(0.5 * RICHARDSON_STEP)?;
    Ok(CharVelocities {
        v_alpha: 2.0 * fine.v_alpha - coarse.v_alpha,
        v_beta: 2.0 * fine.v_beta - coarse.v_beta,
    })
}

/// Maps `(p, z)` to the mirror model, in which the species are exchanged and
/// space is reflected. Densities transform as `(rho_circ, rho_bullet) ->
/// (rho_bullet, rho_circ)`, currents as [`Currents::dual`] and velocities as
/// `(v_alpha, v_beta) -> (-v_beta, -v_alpha)`. The map is an involution.
pub fn duality_transform(p: &ModelParams, z: RiemannVars) -> (ModelParams, RiemannVars) {
    (p.dual(), z.swapped())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn p(alpha: f64, beta: f64) -> ModelParams {
        ModelParams::new(alpha, beta).unwrap()
    }

    #[test]
    fn empty_lattice_maps_to_origin() {
        for (al, be) in [(0.8, 0.9), (1.5, 0.7), (0.2, 3.0)] {
            let z = z_from_rho(Densities::new(0.0, 0.0), &p(al, be)).unwrap();
            assert_eq!(z, RiemannVars::new(0.0, 0.0));
            let rho = rho_from_z(RiemannVars::new(0.0, 0.0), &p(al, be)).unwrap();
            assert_eq!(rho, Densities::new(0.0, 0.0));
            let j = currents_from_z(RiemannVars::new(0.0, 0.0), &p(al, be)).unwrap();
            assert_abs_diff_eq!(j.j_circ, 0.0);
            assert_abs_diff_eq!(j.j_bullet, 0.0);
        }
    }

    #[test]
    fn diagonal_is_identity() {
        let params = p(0.8, 0.9);
        for k in 1..10 {
            let c = 0.1 * k as f64;
            let z = z_from_rho(Densities::new(c, 1.0 - c), &params).unwrap();
            // on the diagonal the physical root is min(rho_circ, alpha)
            assert_abs_diff_eq!(z.z_alpha, c.min(0.8), epsilon = 1e-12);
        }
        for k in 1..8 {
            let a = 0.1 * k as f64;
            let rho = rho_from_z(RiemannVars::new(a, 1.0 - a), &params).unwrap();
            assert_abs_diff_eq!(rho.rho_circ, a, epsilon = 1e-15);
            let z = z_from_rho(Densities::new(a, 1.0 - a), &params).unwrap();
            assert_abs_diff_eq!(z.z_alpha, a, epsilon = 1e-12);
            assert_abs_diff_eq!(z.z_beta, 1.0 - a, epsilon = 1e-12);
        }
    }

    #[test]
    fn diagonal_currents_reduce_to_tasep() {
        let params = p(0.8, 0.9);
        for k in 1..8 {
            let a = 0.1 * k as f64;
            let z = RiemannVars::new(a, 1.0 - a);
            let j = currents_from_z(z, &params).unwrap();
            assert_abs_diff_eq!(j.j_circ, -a * (1.0 - a), epsilon = 1e-14);
            assert_abs_diff_eq!(j.j_bullet, (1.0 - a) * a, epsilon = 1e-14);
            // slightly inside, the rational form must agree with the closed form
            let inside = RiemannVars::new(a - 1e-9, 1.0 - a);
            let ji = currents_from_z(inside, &params).unwrap();
            assert_abs_diff_eq!(ji.j_circ, j.j_circ, epsilon = 1e-8);
            let v = char_velocities(z, &params).unwrap();
            assert_abs_diff_eq!(v.v_alpha, 2.0 * a - 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(v.v_beta, 2.0 * a - 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn roundtrip_at_reference_point() {
        let params = p(0.8, 0.9);
        let z = RiemannVars::new(0.4, 0.3);
        let rho = rho_from_z(z, &params).unwrap();
        let back = z_from_rho(rho, &params).unwrap();
        assert!(back.max_abs_diff(&z) < 1e-12);
        let (r1, r2) = density_relation_residual(rho, z, &params);
        assert!(r1.abs() < 1e-14 && r2.abs() < 1e-14);
    }

    #[test]
    fn rational_currents_match_linear_form() {
        for (al, be) in [(0.8, 0.9), (0.5, 0.5), (1.0, 1.0), (1.5, 0.7), (2.5, 3.0)] {
            let params = p(al, be);
            for (fa, fb) in [(0.2, 0.3), (0.5, 0.1), (0.1, 0.6), (0.45, 0.45)] {
                let z = RiemannVars::new(fa * params.z_alpha_max(), fb * params.z_beta_max());
                if !in_physical_domain(z, &params, 0.0) {
                    continue;
                }
                let rho = rho_from_z(z, &params).unwrap();
                let j = currents_from_z(z, &params).unwrap();
                let (a, b) = (z.z_alpha, z.z_beta);
                let jc = a * (b - 1.0) + rho.rho_circ * (a - b);
                let jb = b * (1.0 - a) + rho.rho_bullet * (a - b);
                assert_abs_diff_eq!(j.j_circ, jc, epsilon = 1e-13);
                assert_abs_diff_eq!(j.j_bullet, jb, epsilon = 1e-13);
                let (r1, r2) = current_relation_residual(j, z, &params);
                assert!(r1.abs() < 1e-13 && r2.abs() < 1e-13, "{r1} {r2}");
            }
        }
    }

    #[test]
    fn unit_rates_make_z_equal_rho() {
        let params = p(1.0, 1.0);
        let rho = Densities::new(0.3, 0.25);
        let z = z_from_rho(rho, &params).unwrap();
        assert_abs_diff_eq!(z.z_alpha, 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(z.z_beta, 0.25, epsilon = 1e-15);
    }

    #[test]
    fn empty_lattice_velocities_are_single_particle_speeds() {
        let v = char_velocities(RiemannVars::new(0.0, 0.0), &p(0.8, 0.9)).unwrap();
        assert_abs_diff_eq!(v.v_alpha, -0.8, epsilon = 1e-14);
        assert_abs_diff_eq!(v.v_beta, 0.9, epsilon = 1e-14);
    }

    #[test]
    fn domain_predicate() {
        let params = p(0.8, 0.9);
        assert!(in_physical_domain(RiemannVars::new(0.0, 0.0), &params, 0.0));
        assert!(!in_physical_domain(RiemannVars::new(0.9, 0.05), &params, 1e-12));
        assert!(!in_physical_domain(RiemannVars::new(0.6, 0.5), &params, 1e-12));
        assert!(in_physical_domain(RiemannVars::new(0.5, 0.5 + 1e-13), &params, 1e-12));
    }

    #[test]
    fn clamping_and_domain_errors() {
        let params = p(0.8, 0.9);
        let z = z_from_rho(Densities::new(-1e-13, 0.5), &params).unwrap();
        assert_eq!(z.z_alpha, 0.0);
        assert!(matches!(z_from_rho(Densities::new(-1e-6, 0.5), &params), Err(Error::Domain(_))));
        assert!(matches!(z_from_rho(Densities::new(0.6, 0.5), &params), Err(Error::Domain(_))));
        assert!(matches!(rho_from_z(RiemannVars::new(0.85, 0.1), &params), Err(Error::Domain(_))));
        assert!(ModelParams::new(0.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, f64::NAN).is_err());
    }

    #[test]
    fn corner_with_collapsed_preimage_is_singular() {
        // z = (1, 0) is reached by the whole segment rho_bullet = 0, rho_circ >= 1/alpha;
        // being on the diagonal it still maps to the hole-free end of that segment
        let params = p(1.5, 0.7);
        let rho = rho_from_z(RiemannVars::new(1.0, 0.0), &params).unwrap();
        assert_eq!(rho, Densities::new(1.0, 0.0));
        let z = z_from_rho(Densities::new(0.8, 0.0), &params).unwrap();
        assert!(z.max_abs_diff(&RiemannVars::new(1.0, 0.0)) < 1e-12);
        let params = p(0.3, 0.4);
        assert!(matches!(
            currents_from_z(RiemannVars::new(0.3, 0.4), &params),
            Err(Error::SingularDenominator { .. })
        ));
    }

    #[test]
    fn duality_is_an_involution() {
        let params = p(0.8, 0.9);
        let z = RiemannVars::new(0.4, 0.3);
        let (p1, z1) = duality_transform(&params, z);
        assert_eq!(p1, p(0.9, 0.8));
        assert_eq!(z1, RiemannVars::new(0.3, 0.4));
        let (p2, z2) = duality_transform(&p1, z1);
        assert_eq!((p2, z2), (params, z));

        let rho = rho_from_z(z, &params).unwrap();
        let rho1 = rho_from_z(z1, &p1).unwrap();
        assert_abs_diff_eq!(rho.rho_circ, rho1.rho_bullet, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.rho_bullet, rho1.rho_circ, epsilon = 1e-14);
        let j = currents_from_z(z, &params).unwrap();
        let j1 = currents_from_z(z1, &p1).unwrap();
        assert!(j1.max_abs_diff(&j.dual()) < 1e-14);
    }

    #[test]
    fn symmetric_fixed_point_has_opposite_currents() {
        let params = p(0.7, 0.7);
        let z = RiemannVars::new(0.3, 0.3);
        assert_eq!(duality_transform(&params, z), (params, z));
        let j = currents_from_z(z, &params).unwrap();
        assert_abs_diff_eq!(j.j_circ, -j.j_bullet, epsilon = 1e-15);
    }

    #[test]
    fn simplex_projection() {
        let d = Densities::new(0.7, 0.5).project_to_simplex();
        assert_abs_diff_eq!(d.rho_circ + d.rho_bullet, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.rho_circ, 0.6, epsilon = 1e-15);
        let d = Densities::new(-0.2, 1.5).project_to_simplex();
        assert_eq!(d, Densities::new(0.0, 1.0));
    }
}
