use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thermalink::bidirectional::build_bidirectional_liouvillian;
use thermalink::operators::{
    build_full_liouvillian_with_tail, build_markov_liouvillian, build_regrouped_liouvillian,
    build_thermal_cavity_liouvillian, drive_superoperators, ket, qubit_liouvillian, singlet, triplet,
    triplet_singlet_transform, ModelParams, Superoperator, TwoQubitSpace,
};
use thermalink::stochastic::phase_diffusion_liouvillian;
use thermalink::{QubitState, C64};

fn random_matrix(dim: usize, seed: u64) -> DMatrix<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DMatrix::from_fn(dim, dim, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

/// Tr 𝓛X = 0 and 𝓛(X†) = (𝓛X)† for a generic (non-Hermitian) X.
fn generator_defects(l: &Superoperator, seed: u64) -> (f64, f64) {
    let x = random_matrix(l.dim(), seed);
    let lx = l.apply(&x);
    let lxd = l.apply(&x.adjoint());
    let herm = (lxd - lx.adjoint()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
    (lx.trace().norm(), herm)
}

fn params() -> impl Strategy<Value = ModelParams> {
    (0.2..2.0f64, 0.2..2.0f64, 0.01..2.0f64, 0.0..3.0f64, -1.0..1.0f64, -1.0..1.0f64, 0.0..0.5f64, 0.0..0.9f64)
        .prop_map(|(g1, g2, k, n, d1, d2, gp, pl)| ModelParams {
            gamma1: g1,
            gamma2: g2,
            kappa: k,
            n_th: n,
            delta1: d1,
            delta2: d2,
            gamma_phi: gp,
            p_loss: pl,
            fock_cutoff: Some(4),
            positions: None,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn full_generator_preserves_trace_and_hermiticity(p in params(), seed in any::<u64>()) {
        let l = build_full_liouvillian_with_tail(&p, 1.0).unwrap();
        let (tr, herm) = generator_defects(&l, seed);
        prop_assert!(tr < 1e-10, "trace {tr}");
        prop_assert!(herm < 1e-10, "hermiticity {herm}");
    }

    #[test]
    fn regrouped_generator_preserves_trace_and_hermiticity(p in params(), seed in any::<u64>()) {
        let p = ModelParams { gamma2: p.gamma1, p_loss: 0.0, n_th: p.n_th.min(1e-3), ..p };
        let l = build_regrouped_liouvillian(&p).unwrap();
        let (tr, herm) = generator_defects(&l, seed);
        prop_assert!(tr < 1e-10 && herm < 1e-10);
    }

    #[test]
    fn qubit_and_markov_generators_preserve_trace_and_hermiticity(p in params(), seed in any::<u64>()) {
        for l in [qubit_liouvillian(&p), build_markov_liouvillian(&ModelParams { gamma2: p.gamma1, ..p.clone() }).unwrap()] {
            let (tr, herm) = generator_defects(&l, seed);
            prop_assert!(tr < 1e-10 && herm < 1e-10);
        }
    }

    #[test]
    fn conditional_generator_preserves_trace_and_hermiticity(
        p in params(), seed in any::<u64>(), re in -5.0..5.0f64, im in -5.0..5.0f64,
    ) {
        let (lp, lm) = drive_superoperators(&p);
        let a = C64::new(re, im);
        let l = qubit_liouvillian(&p).plus(lp.scaled(a)).plus(lm.scaled(a.conj()));
        let (tr, herm) = generator_defects(&l, seed);
        prop_assert!(tr < 1e-10 && herm < 1e-10);
    }

    #[test]
    fn cavity_and_phase_diffusion_generators_preserve_trace_and_hermiticity(
        p in params(), seed in any::<u64>(), r0 in 0.1..10.0f64,
    ) {
        let p = ModelParams { gamma2: p.gamma1, ..p };
        for l in [build_thermal_cavity_liouvillian(&p).unwrap(), phase_diffusion_liouvillian(&p, r0).unwrap()] {
            let (tr, herm) = generator_defects(&l, seed);
            prop_assert!(tr < 1e-10 && herm < 1e-10);
        }
    }

    #[test]
    fn bidirectional_generator_preserves_trace_and_hermiticity(
        p in params(), seed in any::<u64>(), z1 in 0.0..7.0f64, z2 in 0.0..7.0f64,
    ) {
        let p = ModelParams { p_loss: 0.0, gamma_phi: p.gamma_phi.max(0.01), n_th: p.n_th.min(1e-3), ..p }
            .with_positions(z1, z2);
        let l = build_bidirectional_liouvillian(&p).unwrap();
        let (tr, herm) = generator_defects(&l, seed);
        prop_assert!(tr < 1e-10 && herm < 1e-10);
    }
}

#[test]
fn tensor_order_is_qubit1_qubit2_cavity() {
    let s = TwoQubitSpace::new(3);
    assert_eq!(s.dim(), 12);
    // σ₁⁻ maps |1,0,n⟩ (index (2·1+0)·3+n) to |0,0,n⟩.
    let sm1 = s.sigma_minus(1);
    for n in 0..3 {
        assert_eq!(sm1.get(n, 6 + n), C64::new(1.0, 0.0));
    }
    let sm2 = s.sigma_minus(2);
    assert_eq!(sm2.get(0, 3), C64::new(1.0, 0.0));
}

#[test]
fn triplet_singlet_basis_of_known_states() {
    let s = QubitState::pure(&singlet()).unwrap();
    let ts = triplet_singlet_transform(&s);
    assert!((ts.rho_s - 1.0).abs() < 1e-15);
    assert!(ts.rho_t.abs() < 1e-15);
    let t = QubitState::pure(&triplet()).unwrap();
    assert!((triplet_singlet_transform(&t).rho_t - 1.0).abs() < 1e-15);
    let g = QubitState::pure(&ket(0, 0)).unwrap();
    assert_eq!(g.ts_populations(), [1.0, 0.0, 0.0, 0.0]);
}

#[test]
fn regrouped_and_full_generators_coincide_without_loss() {
    let p = ModelParams::symmetric(1.0, 0.3, 1.0).with_detunings(0.2, -0.1).with_cutoff(40);
    let full = build_full_liouvillian_with_tail(&p, 1e-6).unwrap();
    let reg = build_regrouped_liouvillian(&p).unwrap();
    assert!(full.max_abs_diff(&reg) < 1e-12);
}

#[test]
fn regrouped_form_rejects_loss() {
    let p = ModelParams::symmetric(1.0, 0.3, 1.0).with_loss(0.1);
    assert!(build_regrouped_liouvillian(&p).is_err());
}

#[test]
fn exact_route_rejects_large_occupation_and_short_cutoff() {
    let big = ModelParams::symmetric(1.0, 0.1, 1220.0);
    assert!(build_full_liouvillian_with_tail(&big, 1e-8).is_err());
    let short = ModelParams::symmetric(1.0, 0.1, 5.0).with_cutoff(3);
    assert!(matches!(build_full_liouvillian_with_tail(&short, 1e-8), Err(thermalink::Error::CutoffTooSmall { .. })));
}

#[test]
fn invalid_parameters_are_rejected() {
    for p in [
        ModelParams::symmetric(-1.0, 0.1, 1.0),
        ModelParams::symmetric(1.0, f64::NAN, 1.0),
        ModelParams::symmetric(1.0, 0.1, -1.0),
        ModelParams::symmetric(1.0, 0.1, 1.0).with_loss(1.5),
    ] {
        assert!(p.validate().is_err(), "{p:?}");
    }
}
