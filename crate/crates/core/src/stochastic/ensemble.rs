use super::conditional::{check_steps, refine, to_matrix4, to_vec16, Propagator, Vec16};
use super::ou::{check_grid, sample_ou};
use crate::operators::ModelParams;
use crate::parallel::{map_indexed, Execution};
use crate::solvers::QubitState;
use crate::{Error, Result, C64};
use nalgebra::{DMatrix, Matrix4};
use serde::Serialize;

/// Smallest accepted ensemble.
pub const MIN_TRAJECTORIES: usize = 100;
/// Default ensemble size.
pub const DEFAULT_TRAJECTORIES: usize = 10_000;

const N_OBS: usize = 10;

/// Populations tracked per trajectory.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct PopulationSet {
    /// ρ₀₀, ρ_T, ρ_S, ρ₁₁.
    pub ts: [f64; 4],
    /// |00⟩, |01⟩, |10⟩, |11⟩.
    pub basis: [f64; 4],
    /// Excited-state probability of qubit 1 and qubit 2.
    pub excitations: [f64; 2],
}

impl PopulationSet {
    fn from_array(a: &[f64; N_OBS]) -> Self {
        PopulationSet { ts: [a[0], a[1], a[2], a[3]], basis: [a[4], a[5], a[6], a[7]], excitations: [a[8], a[9]] }
    }
}

fn observables(y: &Vec16) -> [f64; N_OBS] {
    let d = |i: usize| y[5 * i].re;
    let x = y[4 + 2].re;
    let (m1, m2) = (d(1), d(2));
    [d(0), 0.5 * (m1 + m2) + x, 0.5 * (m1 + m2) - x, d(3), d(0), m1, m2, d(3), m2 + d(3), m1 + d(3)]
}

/// Running sums over trajectories, merged in trajectory order.
#[derive(Clone)]
struct Accumulator {
    n: usize,
    state: Vec16,
    sum: [f64; N_OBS],
    sumsq: [f64; N_OBS],
}

impl Accumulator {
    fn new() -> Self {
        Accumulator { n: 0, state: Vec16::zeros(), sum: [0.0; N_OBS], sumsq: [0.0; N_OBS] }
    }

    fn push(&mut self, y: &Vec16, obs: &[f64; N_OBS]) {
        self.n += 1;
        self.state += y;
        for k in 0..N_OBS {
            self.sum[k] += obs[k];
            self.sumsq[k] += obs[k] * obs[k];
        }
    }

    fn mean_state(&self) -> Matrix4<C64> {
        to_matrix4(&(self.state / C64::from(self.n as f64)))
    }

    fn stats(&self) -> (PopulationSet, PopulationSet) {
        let n = self.n as f64;
        let mut mean = [0.0; N_OBS];
        let mut se = [0.0; N_OBS];
        for k in 0..N_OBS {
            mean[k] = self.sum[k] / n;
            let var = ((self.sumsq[k] - n * mean[k] * mean[k]) / (n - 1.0)).max(0.0);
            se[k] = (var / n).sqrt();
        }
        (PopulationSet::from_array(&mean), PopulationSet::from_array(&se))
    }
}

/// Knobs for ensemble runs.
#[derive(Clone, Debug)]
pub struct EnsembleOptions {
    /// Initial qubit state; |00⟩ when unset.
    pub initial: Option<QubitState>,
    /// Integration step; stability-limited default when unset.
    pub dt: Option<f64>,
    pub execution: Execution,
    /// Trajectories per parallel batch.
    pub batch: usize,
}

impl Default for EnsembleOptions {
    fn default() -> Self {
        EnsembleOptions { initial: None, dt: None, execution: Execution::default(), batch: 256 }
    }
}

/// Field bound exceeded with probability about 1e-15 per sample.
fn alpha_bound(n_th: f64) -> f64 {
    (n_th / 2.0 * 15.0 * std::f64::consts::LN_10).sqrt()
}

fn check_count(n_traj: usize) -> Result<()> {
    if n_traj < MIN_TRAJECTORIES {
        return Err(Error::TooFewTrajectories { min: MIN_TRAJECTORIES, got: n_traj });
    }
    Ok(())
}

fn to_qubit_state(m: &Matrix4<C64>) -> Result<QubitState> {
    QubitState::from_numerical(&DMatrix::from_fn(4, 4, |i, j| m[(i, j)]))
}

/// Trajectory average ρ_q(t) = ⟨μ(α(t), t)⟩ with Monte-Carlo errors.
#[derive(Clone, Debug)]
pub struct TrajectoryEnsemble {
    pub n_traj: usize,
    pub seed: u64,
    pub dt: f64,
    pub times: Vec<f64>,
    pub states: Vec<QubitState>,
    pub mean: Vec<PopulationSet>,
    /// Standard errors of the means in `mean`.
    pub stderr: Vec<PopulationSet>,
    /// max |Tr ρ_q − 1| before renormalization.
    pub trace_defect: f64,
}

impl TrajectoryEnsemble {
    pub fn concurrences(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.concurrence()).collect()
    }
}

pub fn ensemble_average(p: &ModelParams, n_traj: usize, t_grid: &[f64], seed: u64) -> Result<TrajectoryEnsemble> {
    ensemble_average_with(p, n_traj, t_grid, seed, &EnsembleOptions::default())
}

/// Averages `n_traj` conditional trajectories. Trajectory k is driven by
/// stream k of `seed`, and partial sums are merged in trajectory order, so
/// the result does not depend on how work is scheduled.
pub fn ensemble_average_with(
    p: &ModelParams,
    n_traj: usize,
    t_grid: &[f64],
    seed: u64,
    opts: &EnsembleOptions,
) -> Result<TrajectoryEnsemble> {
    check_count(n_traj)?;
    check_grid(t_grid)?;
    let prop = Propagator::new(p)?;
    let dt = opts.dt.unwrap_or_else(|| prop.default_step(alpha_bound(p.n_th)));
    let (fine, marks) = refine(t_grid, dt);
    let y0 = match &opts.initial {
        Some(s) => to_vec16(s.matrix()),
        None => to_vec16(QubitState::pure(&crate::operators::ket(0, 0))?.matrix()),
    };
    let run = |k: usize| -> Result<Vec<Vec16>> {
        let path = sample_ou(p.kappa, p.n_th, &fine, seed, k as u64)?;
        check_steps(&prop, &path)?;
        let mut out = Vec::with_capacity(marks.len());
        let mut y = y0;
        out.push(y);
        let mut next = 1;
        for i in 1..fine.len() {
            y = prop.step(&y, path.alpha[i - 1], fine[i] - fine[i - 1]);
            if next < marks.len() && marks[next] == i {
                out.push(y);
                next += 1;
            }
        }
        Ok(out)
    };
    let mut acc = vec![Accumulator::new(); t_grid.len()];
    let batch = opts.batch.max(1);
    let mut start = 0;
    while start < n_traj {
        let len = batch.min(n_traj - start);
        let results = map_indexed(len, opts.execution, |i| run(start + i));
        for r in results {
            for (a, y) in acc.iter_mut().zip(r?.iter()) {
                a.push(y, &observables(y));
            }
        }
        start += len;
    }
    let mut states = Vec::with_capacity(acc.len());
    let mut mean = Vec::with_capacity(acc.len());
    let mut stderr = Vec::with_capacity(acc.len());
    let mut trace_defect: f64 = 0.0;
    for a in &acc {
        let m = a.mean_state();
        trace_defect = trace_defect.max((m.trace() - C64::from(1.0)).norm());
        states.push(to_qubit_state(&m)?);
        let (mu, se) = a.stats();
        mean.push(mu);
        stderr.push(se);
    }
    Ok(TrajectoryEnsemble { n_traj, seed, dt, times: t_grid.to_vec(), states, mean, stderr, trace_defect })
}

/// Burn-in and averaging window for steady-state estimates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SteadyWindow {
    pub burn_in: f64,
    pub window: f64,
}

impl SteadyWindow {
    /// 20/γ of burn-in, then a window of min(1/κ, 100/γ), at least 20/γ.
    pub fn for_params(p: &ModelParams) -> Self {
        let g = p.gamma1.max(p.gamma2).max(f64::MIN_POSITIVE);
        SteadyWindow { burn_in: 20.0 / g, window: (1.0 / p.kappa).min(100.0 / g).max(20.0 / g) }
    }
}

/// Steady-state estimate from trajectory time averages.
#[derive(Clone, Debug)]
pub struct EnsembleSteady {
    pub n_traj: usize,
    pub seed: u64,
    pub dt: f64,
    pub window: SteadyWindow,
    pub state: QubitState,
    pub mean: PopulationSet,
    pub stderr: PopulationSet,
    pub concurrence: f64,
}

/// Each trajectory starts in the conditional steady state of its initial
/// field, runs through the burn-in and is time-averaged over the window. Errors
/// are standard errors across trajectories.
pub fn ensemble_steady(
    p: &ModelParams,
    n_traj: usize,
    seed: u64,
    window: Option<SteadyWindow>,
    opts: &EnsembleOptions,
) -> Result<EnsembleSteady> {
    check_count(n_traj)?;
    let w = window.unwrap_or_else(|| SteadyWindow::for_params(p));
    if !(w.burn_in >= 0.0) || !(w.window > 0.0) {
        return Err(Error::InvalidTimeGrid(format!("burn-in {} and window {}", w.burn_in, w.window)));
    }
    let prop = Propagator::new(p)?;
    let dt = opts.dt.unwrap_or_else(|| prop.default_step(alpha_bound(p.n_th)));
    let n_burn = (w.burn_in / dt).ceil() as usize;
    let n_win = (w.window / dt).ceil().max(1.0) as usize;
    let fine: Vec<f64> = (0..=n_burn + n_win).map(|k| k as f64 * dt).collect();
    let run = |k: usize| -> Result<Vec16> {
        let path = sample_ou(p.kappa, p.n_th, &fine, seed, k as u64)?;
        check_steps(&prop, &path)?;
        let mut y = prop.adiabatic(path.alpha[0])?;
        let mut avg = Vec16::zeros();
        for i in 1..fine.len() {
            y = prop.step(&y, path.alpha[i - 1], dt);
            if i > n_burn {
                avg += y;
            }
        }
        Ok(avg / C64::from(n_win as f64))
    };
    let mut acc = Accumulator::new();
    let batch = opts.batch.max(1);
    let mut start = 0;
    while start < n_traj {
        let len = batch.min(n_traj - start);
        for r in map_indexed(len, opts.execution, |i| run(start + i)) {
            let y = r?;
            acc.push(&y, &observables(&y));
        }
        start += len;
    }
    let state = to_qubit_state(&acc.mean_state())?;
    let (mean, stderr) = acc.stats();
    let concurrence = state.concurrence();
    Ok(EnsembleSteady { n_traj, seed, dt, window: w, state, mean, stderr, concurrence })
}

/// One conditional trajectory sampled on an output grid.
#[derive(Clone, Debug)]
pub struct SingleTrajectory {
    pub seed: u64,
    pub stream: u64,
    pub dt: f64,
    pub times: Vec<f64>,
    /// Field α(t) at the output times.
    pub alpha: Vec<C64>,
    pub states: Vec<QubitState>,
}

/// Trajectory `stream` of an ensemble run with the same seed, step and initial state.
pub fn single_trajectory(
    p: &ModelParams,
    t_grid: &[f64],
    seed: u64,
    stream: u64,
    opts: &EnsembleOptions,
) -> Result<SingleTrajectory> {
    check_grid(t_grid)?;
    let prop = Propagator::new(p)?;
    let dt = opts.dt.unwrap_or_else(|| prop.default_step(alpha_bound(p.n_th)));
    let (fine, marks) = refine(t_grid, dt);
    let initial = match &opts.initial {
        Some(s) => s.clone(),
        None => QubitState::pure(&crate::operators::ket(0, 0))?,
    };
    let path = sample_ou(p.kappa, p.n_th, &fine, seed, stream)?;
    let traj = super::propagate_conditional_from(&path, p, &initial)?;
    let states = marks.iter().map(|&k| traj.state(k)).collect::<Result<Vec<_>>>()?;
    let alpha = marks.iter().map(|&k| path.alpha[k]).collect();
    Ok(SingleTrajectory { seed, stream, dt, times: t_grid.to_vec(), alpha, states })
}
