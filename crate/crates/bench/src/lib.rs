//! Fixtures shared by the benchmarks.

use twotasep_core::{BoundaryRates, ModelParams, RiemannVars};

pub fn params() -> ModelParams {
    ModelParams::new(0.8, 0.9).expect("valid rates")
}

/// Points spread over the interior of the domain of `p`.
pub fn interior_points(p: &ModelParams, n: usize) -> Vec<RiemannVars> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let a = p.z_alpha_max() * (i as f64 + 0.5) / n as f64;
            let b = p.z_beta_max() * (j as f64 + 0.5) / n as f64;
            if a + b < 1.0 - 1e-6 {
                out.push(RiemannVars::new(a, b));
            }
        }
    }
    out
}

/// One Riemann problem per wave pattern.
pub fn riemann_cases() -> [(&'static str, RiemannVars, RiemannVars); 4] {
    [
        ("shock-fan", RiemannVars::new(0.4, 0.4), RiemannVars::new(0.2, 0.2)),
        ("fan-fan", RiemannVars::new(0.15, 0.45), RiemannVars::new(0.45, 0.15)),
        ("three-fans", RiemannVars::new(0.2, 0.75), RiemannVars::new(0.7, 0.25)),
        ("shock-shock", RiemannVars::new(0.45, 0.15), RiemannVars::new(0.15, 0.45)),
    ]
}

pub fn rate_sets() -> [(&'static str, BoundaryRates); 2] {
    [
        ("uniform", BoundaryRates::uniform(0.5)),
        (
            "mixed",
            BoundaryRates {
                nu_bullet_star_l: 0.7,
                nu_star_circ_l: 0.3,
                nu_bullet_circ_l: 0.5,
                nu_bullet_star_r: 0.4,
                nu_star_circ_r: 0.6,
                nu_bullet_circ_r: 0.2,
            },
        ),
    ]
}
