mod common;

use common::{max_abs_diff, scaled_e1_quad, upsilon_quad};
use proptest::prelude::*;
use thermalink::analytic::{
    bourret_concurrence, bourret_full, bourret_lowest, bourret_steady, coherence_functions, e1, kappa_max,
    markov_steady, quasistatic_steady, scaled_e1, thermal_occupation, upsilon,
};
use thermalink::operators::ModelParams;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn scaled_e1_matches_quadrature(z in 1e-3..50.0f64) {
        let q = scaled_e1_quad(z);
        prop_assert!((scaled_e1(z) - q).abs() < 1e-10 * q);
        prop_assert!((e1(z) - q * (-z).exp()).abs() < 1e-10 * q * (-z).exp());
    }

    #[test]
    fn bourret_populations_are_normalized(g in 0.5..2.0f64, k in 1e-4..1.0f64, phi in 0.0..20.0f64) {
        let f = bourret_full(g, k, phi);
        prop_assert!((f.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(f.iter().all(|&x| x >= 0.0));
    }
}

#[test]
fn upsilon_is_a_thermal_average() {
    for x in [1e-3, 0.05, 0.5, 3.0, 40.0, 1e3] {
        let u = upsilon(x).unwrap();
        assert!((u - upsilon_quad(x)).abs() < 1e-10, "{x}");
    }
    assert!(upsilon(0.0).is_err());
    assert!(upsilon(f64::NAN).is_err());
}

#[test]
fn markov_state_is_a_product_of_thermal_qubits() {
    for n in [0.0f64, 0.5, 1.0, 2.0, 5.0] {
        let pe = n / (2.0 * n + 1.0);
        let expected = [(1.0 - pe).powi(2), pe * (1.0 - pe), pe * (1.0 - pe), pe * pe];
        let m = markov_steady(n);
        assert!(max_abs_diff(&m.populations, &expected) < 1e-15);
        assert_eq!(m.concurrence, 0.0);
    }
}

#[test]
fn quasistatic_state_mixes_ground_and_singlet() {
    let q = quasistatic_steady(2.0).unwrap();
    let u = upsilon_quad(2.0);
    assert!(max_abs_diff(&q.populations, &[u, 0.0, 1.0 - u, 0.0]) < 1e-10);
    assert!((q.concurrence - (1.0 - u)).abs() < 1e-10);
    assert_eq!(quasistatic_steady(0.0).unwrap().concurrence, 0.0);
    assert!(quasistatic_steady(-1.0).is_err());
}

#[test]
fn bourret_lowest_order_agrees_with_full_at_small_bandwidth() {
    let (g, phi) = (1.0, 3.0);
    for k in [1e-4, 1e-3] {
        let f = bourret_full(g, k, phi);
        let l = bourret_lowest(g, k, phi);
        assert!(max_abs_diff(&f, &l) < 2.0 * k / g, "{k}");
        assert!((bourret_full(g, k, phi)[0] - g / (g + 8.0 * phi)).abs() < 2.0 * k / g);
    }
}

#[test]
fn bourret_concurrence_vanishes_at_kappa_max() {
    for n in 1..=10 {
        let p = ModelParams::symmetric(1.0, 0.1, n as f64);
        let km = kappa_max(&p).unwrap();
        assert!((0.18..0.25).contains(&km), "n_th = {n}: {km}");
        let below = ModelParams::symmetric(1.0, km * 0.99, n as f64);
        let above = ModelParams::symmetric(1.0, km * 1.01, n as f64);
        assert!(bourret_concurrence(&below).unwrap() > 0.0);
        assert_eq!(bourret_concurrence(&above).unwrap(), 0.0);
    }
    assert!(kappa_max(&ModelParams::symmetric(1.0, 0.1, 0.0)).is_err());
}

#[test]
fn bourret_steady_rejects_zero_bandwidth() {
    let p = ModelParams { kappa: 0.0, ..ModelParams::symmetric(1.0, 0.1, 2.0) };
    assert!(bourret_steady(&p).is_err());
}

#[test]
fn coherence_functions_of_thermal_light() {
    let (g1, g2) = coherence_functions(0.5, 0.0).unwrap();
    assert_eq!((g1, g2), (1.0, 2.0));
    let (g1, g2) = coherence_functions(0.5, 4.0).unwrap();
    assert!((g1 - (-2.0f64).exp()).abs() < 1e-15);
    assert!((g2 - 1.0 - (-4.0f64).exp()).abs() < 1e-15);
    assert!(coherence_functions(0.5, -1.0).is_err());
}

#[test]
fn thermal_occupation_limits() {
    // High temperature: n ≈ k_BT/hf − 1/2.
    let (t, f) = (300.0, 1e9);
    let h = 6.626_070_15e-34;
    let kb = 1.380_649e-23;
    let classical = kb * t / (h * f) - 0.5;
    assert!((thermal_occupation(t, f).unwrap() - classical).abs() < 1e-3);
    // Low temperature: n ≈ e^{−hf/k_BT}.
    let (t, f) = (0.02, 10e9);
    let boltzmann = (-h * f / (kb * t)).exp();
    assert!((thermal_occupation(t, f).unwrap() / boltzmann - 1.0).abs() < 1e-7);
    assert!(thermal_occupation(0.0, f).is_err());
    assert!(thermal_occupation(t, -1.0).is_err());
}
