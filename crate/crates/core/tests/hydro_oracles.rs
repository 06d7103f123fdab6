//! Closed forms checked against numerics that do not use them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twotasep_core::validation::oracle;
use twotasep_core::*;

fn p() -> ModelParams {
    ModelParams::new(0.8, 0.9).unwrap()
}

#[test]
fn newton_from_many_starts_finds_the_closed_form_root() {
    let p = p();
    let rho = Densities::new(0.3, 0.4);
    let z = z_from_rho(rho, &p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut hits = 0;
    for _ in 0..100 {
        let start = RiemannVars::new(rng.random_range(0.0..p.z_alpha_max()), rng.random_range(0.0..p.z_beta_max()));
        let Some(root) = oracle::newton_z(rho, &p, start) else { continue };
        // the cubic has other roots outside the domain; only physical ones count
        if in_physical_domain(root, &p, 1e-9) {
            assert!(root.max_abs_diff(&z) < 1e-10, "{root:?} vs {z:?}");
            hits += 1;
        }
    }
    assert!(hits > 50, "only {hits} starts converged inside the domain");
}

#[test]
fn velocities_are_eigenvalues_of_the_current_jacobian() {
    let p = p();
    let rho = Densities::new(0.4, 0.3);
    let v = char_velocities(z_from_rho(rho, &p).unwrap(), &p).unwrap();
    let m = oracle::current_jacobian(rho, &p, 1e-6).unwrap();
    let (lo, hi) = oracle::eigenvalues(m).unwrap();
    assert!((lo - v.v_alpha).abs() < 1e-6, "{lo} vs {}", v.v_alpha);
    assert!((hi - v.v_beta).abs() < 1e-6, "{hi} vs {}", v.v_beta);

    let ((r1, r2), defect) = oracle::eigen_biorthogonal(m).unwrap();
    assert!((r1 - lo).abs() < 1e-8 && (r2 - hi).abs() < 1e-8);
    assert!(defect < 1e-6, "left/right eigenvectors not bi-orthogonal: {defect}");
}

#[test]
fn velocities_match_the_jacobian_over_the_domain() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..300 {
        let p = ModelParams::new(rng.random_range(0.2..2.0), rng.random_range(0.2..2.0)).unwrap();
        let a = rng.random_range(0.02..p.z_alpha_max() - 0.02);
        let top = (p.z_beta_max() - 0.02).min(1.0 - a - 0.02);
        if top <= 0.02 {
            continue;
        }
        let z = RiemannVars::new(a, rng.random_range(0.02..top));
        let Ok(rho) = rho_from_z(z, &p) else { continue };
        let Some(m) = oracle::current_jacobian(rho, &p, 1e-7) else { continue };
        let (lo, hi) = oracle::eigenvalues(m).unwrap();
        let v = char_velocities(z, &p).unwrap();
        assert!(v.v_alpha <= v.v_beta + 1e-12);
        assert!((lo - v.v_alpha).abs() < 1e-5 && (hi - v.v_beta).abs() < 1e-5, "{p:?} {z:?}");
    }
}

#[test]
fn velocity_signs_follow_the_jacobian_determinant_sign_pattern() {
    // v_alpha changes sign across a curve inside the domain; the product of
    // the eigenvalues is the Jacobian determinant, so both must agree.
    let p = p();
    let n = 60;
    for i in 1..n {
        for j in 1..n {
            let z = RiemannVars::new(p.z_alpha_max() * i as f64 / n as f64, p.z_beta_max() * j as f64 / n as f64);
            if !in_physical_domain(z, &p, 0.0) || z.z_alpha + z.z_beta > 1.0 - 1e-3 {
                continue;
            }
            let v = char_velocities(z, &p).unwrap();
            let m = oracle::current_jacobian(rho_from_z(z, &p).unwrap(), &p, 1e-7).unwrap();
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            let prod = v.v_alpha * v.v_beta;
            if prod.abs() > 1e-4 {
                assert_eq!(det.signum(), prod.signum(), "{z:?}");
            }
        }
    }
}

#[test]
fn roundtrip_on_a_grid() {
    let p = p();
    let n = 80;
    let mut worst = 0.0f64;
    for i in 0..=n {
        for j in 0..=n {
            let z = RiemannVars::new(p.z_alpha_max() * i as f64 / n as f64, p.z_beta_max() * j as f64 / n as f64);
            if !in_physical_domain(z, &p, 0.0) {
                continue;
            }
            let Ok(rho) = rho_from_z(z, &p) else { continue };
            let back = z_from_rho(rho, &p).unwrap();
            worst = worst.max(back.max_abs_diff(&z));
            let (r1, r2) = oracle::density_residuals(rho, z, &p);
            assert!(r1.abs().max(r2.abs()) < 1e-12);
        }
    }
    assert!(worst < 1e-9, "{worst}");
}

#[test]
fn currents_satisfy_the_implicit_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..500 {
        let p = ModelParams::new(rng.random_range(0.2..2.0), rng.random_range(0.2..2.0)).unwrap();
        let a = rng.random_range(0.0..p.z_alpha_max());
        let b = rng.random_range(0.0..p.z_beta_max().min(1.0 - a));
        let z = RiemannVars::new(a, b);
        let Ok(j) = currents_from_z(z, &p) else { continue };
        let (r1, r2) = oracle::current_residuals(j.j_circ, j.j_bullet, z, &p);
        assert!(r1.abs().max(r2.abs()) < 1e-12, "{z:?} {p:?}: {r1} {r2}");
    }
}

#[test]
fn domain_predicate_rejects_outside_points() {
    let p = p();
    assert!(in_physical_domain(RiemannVars::new(0.4, 0.5), &p, 0.0));
    assert!(!in_physical_domain(RiemannVars::new(0.85, 0.1), &p, 1e-9));
    assert!(!in_physical_domain(RiemannVars::new(0.6, 0.5), &p, 1e-9));
    assert!(rho_from_z(RiemannVars::new(0.6, 0.5), &p).is_err());
}
