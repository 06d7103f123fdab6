use proptest::prelude::*;
use twotasep_core::*;

fn p() -> ModelParams {
    ModelParams::new(0.8, 0.9).unwrap()
}

fn domain_z() -> impl Strategy<Value = RiemannVars> {
    (0.0..0.8f64, 0.0..0.9f64)
        .prop_filter("inside the simplex", |(a, b)| a + b <= 1.0)
        .prop_map(|(a, b)| RiemannVars::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn waves_are_ordered_and_shocks_admissible(zl in domain_z(), zr in domain_z()) {
        let p = p();
        let Ok(sol) = solve_riemann(RiemannData::new(zl, zr, p)) else { return Ok(()) };
        for w in sol.waves.windows(2) {
            prop_assert!(w[0].speed_hi <= w[1].speed_lo + 1e-9, "{:?}", sol.waves);
        }
        for w in &sol.waves {
            prop_assert!(w.speed_lo <= w.speed_hi + 1e-12);
            if w.family.is_shock() {
                // Lax: characteristics of the shock's family run into it
                let pick = |z| -> f64 {
                    let v = char_velocities(z, &p).unwrap();
                    if matches!(w.family, WaveFamily::AlphaShock) { v.v_alpha } else { v.v_beta }
                };
                prop_assert!(pick(w.state_before) >= w.speed_lo - 1e-7);
                prop_assert!(pick(w.state_after) <= w.speed_lo + 1e-7);
            }
        }
    }

    #[test]
    fn solution_recovers_data_far_out(zl in domain_z(), zr in domain_z()) {
        let p = p();
        let Ok(sol) = solve_riemann(RiemannData::new(zl, zr, p)) else { return Ok(()) };
        prop_assert!(eval_solution(&sol, -10.0).unwrap().max_abs_diff(&zl) < 1e-12);
        prop_assert!(eval_solution(&sol, 10.0).unwrap().max_abs_diff(&zr) < 1e-12);
    }

    #[test]
    fn fans_are_continuous(zl in domain_z(), zr in domain_z()) {
        let p = p();
        let Ok(sol) = solve_riemann(RiemannData::new(zl, zr, p)) else { return Ok(()) };
        for w in sol.waves.iter().filter(|w| !w.family.is_shock()) {
            let width = w.speed_hi - w.speed_lo;
            if width < 1e-6 {
                continue;
            }
            let mut prev = eval_solution(&sol, w.speed_lo + 1e-9).unwrap();
            prop_assert!(prev.max_abs_diff(&w.state_before) < 1e-6);
            for k in 1..=50 {
                let xi = w.speed_lo + width * k as f64 / 50.0 - 1e-9;
                let z = eval_solution(&sol, xi).unwrap();
                prop_assert!(z.max_abs_diff(&prev) < 0.2, "jump inside a fan at {xi}");
                prev = z;
            }
            prop_assert!(prev.max_abs_diff(&w.state_after) < 1e-6);
        }
    }

    #[test]
    fn shock_lines_are_straight_in_density_space(zl in domain_z(), zr in domain_z()) {
        // Temple class: each shock joins states whose densities and
        // currents satisfy the jump condition for both species
        let p = p();
        let Ok(sol) = solve_riemann(RiemannData::new(zl, zr, p)) else { return Ok(()) };
        for w in sol.waves.iter().filter(|w| w.family.is_shock()) {
            let (r0, r1) = (rho_from_z(w.state_before, &p).unwrap(), rho_from_z(w.state_after, &p).unwrap());
            let (j0, j1) = (currents_from_z(w.state_before, &p).unwrap(), currents_from_z(w.state_after, &p).unwrap());
            let s = w.speed_lo;
            prop_assert!((j1.j_circ - j0.j_circ - s * (r1.rho_circ - r0.rho_circ)).abs() < 1e-9);
            prop_assert!((j1.j_bullet - j0.j_bullet - s * (r1.rho_bullet - r0.rho_bullet)).abs() < 1e-9);
        }
    }

    #[test]
    fn dual_problem_mirrors_the_solution(zl in domain_z(), zr in domain_z(), xi in -1.0..1.0f64) {
        let p = p();
        let data = RiemannData::new(zl, zr, p);
        let (Ok(sol), Ok(dual)) = (solve_riemann(data), solve_riemann(data.dual())) else { return Ok(()) };
        // the two evaluations only disagree at the wave edges themselves
        if sol.waves.iter().any(|w| (w.speed_lo - xi).abs() < 1e-6 || (w.speed_hi - xi).abs() < 1e-6) {
            return Ok(());
        }
        let z = eval_solution(&sol, xi).unwrap();
        let zd = eval_solution(&dual, -xi).unwrap();
        prop_assert!(zd.max_abs_diff(&z.swapped()) < 1e-9, "{z:?} vs {zd:?}");
    }
}

#[test]
fn profile_sampling_spans_the_interval() {
    let p = p();
    let sol = solve_riemann(RiemannData::new(RiemannVars::new(0.15, 0.45), RiemannVars::new(0.45, 0.15), p)).unwrap();
    let prof = sample_profile(&sol, -1.0, 1.0, 101).unwrap();
    assert_eq!(prof.len(), 101);
    assert_eq!(prof[0].xi, -1.0);
    assert_eq!(prof[100].xi, 1.0);
    for pt in &prof {
        assert!(rho_from_z(pt.z, &p).unwrap().max_abs_diff(&pt.rho) < 1e-12);
    }
}

#[test]
fn r0_is_the_value_at_the_origin() {
    let p = p();
    let (l, r) = (Densities::new(0.1, 0.6), Densities::new(0.5, 0.2));
    let sol = solve_riemann(RiemannData::from_densities(l, r, p).unwrap()).unwrap();
    let at_zero = rho_from_z(eval_solution(&sol, 0.0).unwrap(), &p).unwrap();
    assert!(r0(l, r, &p).unwrap().max_abs_diff(&at_zero) < 1e-12);
}
