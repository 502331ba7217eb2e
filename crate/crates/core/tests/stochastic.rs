use thermalink::operators::{ket, ModelParams};
use thermalink::parallel::Execution;
use thermalink::stochastic::{
    conditional_steady_state, ensemble_average_with, ensemble_steady, phase_diffusion_rate, propagate_constant,
    sample_ou, single_trajectory, static_dark_state, EnsembleOptions, SteadyWindow,
};
use thermalink::{QubitState, C64};

const PATHS: usize = 100_000;

struct Moments {
    n: f64,
    sum: f64,
    sumsq: f64,
}

impl Moments {
    fn new() -> Self {
        Moments { n: 0.0, sum: 0.0, sumsq: 0.0 }
    }
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        self.sum += x;
        self.sumsq += x * x;
    }
    fn mean(&self) -> f64 {
        self.sum / self.n
    }
    fn stderr(&self) -> f64 {
        let m = self.mean();
        ((self.sumsq / self.n - m * m) / (self.n - 1.0)).sqrt()
    }
    fn within(&self, expected: f64, sigmas: f64) -> bool {
        (self.mean() - expected).abs() <= sigmas * self.stderr()
    }
}

#[test]
fn ou_paths_have_stationary_moments() {
    let (kappa, n_th) = (0.7, 3.0);
    let lags = [0.0, 0.25, 0.5, 1.0, 2.0, 4.0];
    let mut re = Moments::new();
    let mut im = Moments::new();
    let mut power = Moments::new();
    let mut corr: Vec<Moments> = (1..lags.len()).map(|_| Moments::new()).collect();
    for k in 0..PATHS {
        let path = sample_ou(kappa, n_th, &lags, 11, k as u64).unwrap();
        let a0 = path.alpha[0];
        re.push(a0.re);
        im.push(a0.im);
        power.push(a0.norm_sqr());
        for (j, m) in corr.iter_mut().enumerate() {
            m.push((a0.conj() * path.alpha[j + 1]).re);
        }
    }
    assert!(re.within(0.0, 4.0), "Re mean {}", re.mean());
    assert!(im.within(0.0, 4.0), "Im mean {}", im.mean());
    assert!(power.within(n_th / 2.0, 4.0), "variance {}", power.mean());
    for (j, m) in corr.iter().enumerate() {
        let expected = n_th / 2.0 * (-kappa * lags[j + 1]).exp();
        assert!(m.within(expected, 4.0), "lag {}: {} vs {}", lags[j + 1], m.mean(), expected);
    }
}

#[test]
fn ou_streams_are_reproducible_and_distinct() {
    let t = [0.0, 1.0, 2.0];
    let a = sample_ou(0.1, 2.0, &t, 5, 3).unwrap();
    assert_eq!(a, sample_ou(0.1, 2.0, &t, 5, 3).unwrap());
    assert_ne!(a.alpha, sample_ou(0.1, 2.0, &t, 5, 4).unwrap().alpha);
    assert_ne!(a.alpha, sample_ou(0.1, 2.0, &t, 6, 3).unwrap().alpha);
    assert!(sample_ou(0.0, 2.0, &t, 5, 3).is_err());
    assert!(sample_ou(0.1, 2.0, &[1.0, 0.5], 5, 3).is_err());
}

fn bits(e: &thermalink::stochastic::TrajectoryEnsemble) -> Vec<u64> {
    e.mean
        .iter()
        .chain(e.stderr.iter())
        .flat_map(|s| s.ts.iter().chain(s.excitations.iter()).map(|x| x.to_bits()))
        .collect()
}

#[test]
fn ensembles_do_not_depend_on_scheduling() {
    let p = ModelParams::symmetric(1.0, 0.05, 2.0);
    let t: Vec<f64> = (0..6).map(|k| k as f64).collect();
    let run = |execution, batch| {
        let opts = EnsembleOptions { execution, batch, ..EnsembleOptions::default() };
        ensemble_average_with(&p, 300, &t, 42, &opts).unwrap()
    };
    let reference = bits(&run(Execution::Sequential, 256));
    assert_eq!(reference, bits(&run(Execution::Parallel, 256)));
    assert_eq!(reference, bits(&run(Execution::Parallel, 7)));
    assert_eq!(reference, bits(&run(Execution::Sequential, 256)));
    assert_ne!(reference, bits(&ensemble_average_with(&p, 300, &t, 43, &EnsembleOptions::default()).unwrap()));
}

#[test]
fn steady_ensembles_do_not_depend_on_scheduling() {
    let p = ModelParams::symmetric(1.0, 0.1, 2.0);
    let w = Some(SteadyWindow { burn_in: 5.0, window: 5.0 });
    let seq = EnsembleOptions { execution: Execution::Sequential, ..EnsembleOptions::default() };
    let a = ensemble_steady(&p, 200, 9, w, &seq).unwrap();
    let b = ensemble_steady(&p, 200, 9, w, &EnsembleOptions::default()).unwrap();
    assert_eq!(a.mean, b.mean);
    assert_eq!(a.stderr, b.stderr);
    assert_eq!(a.concurrence.to_bits(), b.concurrence.to_bits());
}

#[test]
fn single_trajectory_is_one_member_of_the_ensemble() {
    let p = ModelParams::symmetric(1.0, 0.05, 2.0);
    let t = [0.0, 0.5, 1.0];
    let opts = EnsembleOptions::default();
    let a = single_trajectory(&p, &t, 3, 17, &opts).unwrap();
    let b = single_trajectory(&p, &t, 3, 17, &opts).unwrap();
    assert_eq!(a.alpha, b.alpha);
    assert_eq!(a.states.len(), 3);
    assert!(a.states.iter().all(|s| (s.matrix().trace() - C64::from(1.0)).norm() < 1e-10));
}

#[test]
fn too_few_trajectories_are_rejected() {
    let p = ModelParams::symmetric(1.0, 0.05, 2.0);
    assert!(ensemble_average_with(&p, 10, &[0.0, 1.0], 1, &EnsembleOptions::default()).is_err());
}

#[test]
fn halving_the_step_converges() {
    let p = ModelParams::symmetric(1.0, 0.05, 0.0);
    let g = QubitState::pure(&ket(0, 0)).unwrap();
    let alpha = C64::new(0.8, 0.3);
    let t = [0.0, 1.0, 3.0];
    let run = |dt: f64| propagate_constant(&p, alpha, &t, &g, Some(dt)).unwrap();
    let err = |a: &[QubitState], b: &[QubitState]| {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x.matrix() - y.matrix()).iter().fold(0.0f64, |m, z| m.max(z.norm())))
            .fold(0.0, f64::max)
    };
    let (s1, s2, s4) = (run(0.02), run(0.01), run(0.005));
    let (e1, e2) = (err(&s1, &s4), err(&s2, &s4));
    assert!(e2 < e1, "{e1} {e2}");
    assert!(e2 < 1e-6, "{e2}");
}

#[test]
fn static_field_relaxes_to_the_dark_state() {
    for (kappa, alpha) in [(0.01, C64::new(3.0, 0.0)), (0.1, C64::new(0.5, -1.2))] {
        let p = ModelParams::symmetric(1.0, kappa, 0.0);
        let cond = conditional_steady_state(&p, alpha).unwrap();
        let dark = static_dark_state(1.0, kappa, alpha).unwrap();
        let d = (cond.matrix() - dark.matrix()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        assert!(d < 1e-9, "{d}");
    }
}

#[test]
fn phase_diffusion_rate_follows_radius() {
    let p = ModelParams::symmetric(1.0, 0.01, 100.0);
    assert!((phase_diffusion_rate(&p, (50.0f64).sqrt()).unwrap() - 0.01 * 100.0 / (8.0 * 50.0)).abs() < 1e-15);
    assert!(phase_diffusion_rate(&p, 0.0).is_err());
}
