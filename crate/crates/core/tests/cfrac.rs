mod common;

use common::{max_abs_diff, scaled_e1_quad};
use proptest::prelude::*;
use thermalink::cfrac::{
    closed_form_concurrence, closed_form_populations, evolve_hierarchy, mcf_fixed, mcf_steady, optimal_occupation,
    scalar_cf_converged, scalar_cf_eval, three_level_cf_steady, PhaseSpaceGenerator,
};
use thermalink::operators::{ket, ModelParams};
use thermalink::solvers::{exact_evolve, exact_steady_state};
use thermalink::QubitState;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn scalar_fraction_matches_exponential_integral(gp in 0.05..20.0f64, x in 0.05..20.0f64) {
        let a = move |n: usize| gp + x * (2 * n + 1) as f64;
        let b = move |n: usize| x * n as f64;
        let c = move |n: usize| x * (n + 1) as f64;
        let cf = scalar_cf_converged(a, b, c, 1.0, 0.0, 16).unwrap();
        let z = gp / x;
        let s = scaled_e1_quad(z);
        let f1 = s / x;
        let f2 = 1.0 + z - 1.0 / s;
        prop_assert!((cf.f1 - f1).abs() < 1e-10 * f1.abs(), "F1 {} vs {}", cf.f1, f1);
        prop_assert!((cf.f2 - f2).abs() < 1e-10 * f2.abs().max(1.0), "F2 {} vs {}", cf.f2, f2);
    }
}

#[test]
fn scalar_fraction_rejects_zero_depth() {
    assert!(scalar_cf_eval(|_| 1.0, |_| 0.0, |_| 0.0, 1.0, 0.0, 0).is_err());
}

#[test]
fn three_level_fraction_reproduces_closed_form() {
    for n in [10.0, 100.0, 1000.0] {
        let p = ModelParams::symmetric(1.0, 1e-4, n);
        let tl = three_level_cf_steady(&p, 64).unwrap();
        let cf = closed_form_populations(&p).unwrap().corrected;
        assert!((tl.rho_s - cf.0).abs() < 1e-8, "{n}: {} {}", tl.rho_s, cf.0);
        assert!((tl.rho_t - cf.1).abs() < 1e-8, "{n}: {} {}", tl.rho_t, cf.1);
    }
}

#[test]
fn closed_form_has_optimum_near_prediction() {
    let p = ModelParams::symmetric(1.0, 1e-3, 100.0);
    let o = optimal_occupation(&p).unwrap();
    assert!((o.n_star - 1.0 / (12.0 * 1e-6)).abs() < 1e-6 * o.n_star);
    assert!(o.n_star_numerical > o.n_star / 2.0 && o.n_star_numerical < o.n_star * 2.0);
    let at = ModelParams::symmetric(1.0, 1e-3, o.n_star_numerical);
    assert!((closed_form_concurrence(&at).unwrap() - o.c_star_numerical).abs() < 1e-12);
}

#[test]
fn mode_expansion_matches_exact_steady_state() {
    for (kappa, n) in [(0.1, 1.0), (0.02, 3.0)] {
        let p = ModelParams::symmetric(1.0, kappa, n);
        let exact = exact_steady_state(&p).unwrap();
        let mcf = mcf_steady(&p, None).unwrap();
        let pe = exact.qubit_state().unwrap().ts_populations();
        assert!(max_abs_diff(&pe, &mcf.populations) < 1e-7, "{kappa} {n}");
        let (ce, cm) = (exact.concurrence.unwrap(), mcf.concurrence);
        assert!((ce - cm).abs() < 1e-6, "{ce} {cm}");
        assert!(mcf.converged);
    }
}

#[test]
fn mode_expansion_converges_with_depth() {
    let p = ModelParams::symmetric(1.0, 0.01, 50.0);
    let g = PhaseSpaceGenerator::from_params(&p).unwrap();
    let shallow = mcf_fixed(&g, 20).unwrap();
    let mid = mcf_fixed(&g, 80).unwrap();
    let deep = mcf_fixed(&g, 160).unwrap();
    let d1 = max_abs_diff(&shallow.populations, &deep.populations);
    let d2 = max_abs_diff(&mid.populations, &deep.populations);
    assert!(d2 < d1);
    assert!(d2 < 1e-8, "{d2}");
}

#[test]
fn hierarchy_matches_exact_evolution() {
    let p = ModelParams::symmetric(1.0, 0.1, 1.0);
    let g0 = QubitState::pure(&ket(0, 0)).unwrap();
    let t = [0.0, 1.0, 3.0, 8.0];
    let exact = exact_evolve(&p, &g0, &t).unwrap();
    let g = PhaseSpaceGenerator::from_params(&p).unwrap();
    let h = evolve_hierarchy(&g, 30, &g0, &t).unwrap();
    for (k, state) in h.states.iter().enumerate() {
        let a = exact.qubit_state(k).unwrap().ts_populations();
        let b = state.ts_populations();
        assert!(max_abs_diff(&a, &b) < 1e-6, "t = {}", t[k]);
    }
}
