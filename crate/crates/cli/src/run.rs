//! Route dispatch for steady states, sweeps and time traces.

use crate::config::{Config, InitialState, Route};
use crate::error::CliError;
use crate::record::{Populations, Record, RecordDiagnostics};
use thermalink::analytic::{bourret_steady, markov_steady, quasistatic_steady};
use thermalink::bidirectional::{bidirectional_phase_space_steady, build_bidirectional_liouvillian};
use thermalink::cfrac::{default_hierarchy_levels, evolve_hierarchy, mcf_steady, CfracSolution, PhaseSpaceGenerator};
use thermalink::operators::{ket, singlet, triplet, ModelParams};
use thermalink::parallel::{map_indexed, Execution};
use thermalink::solvers::{exact_evolve, exact_steady_state, steady_state, SteadyStateResult};
use thermalink::stochastic::{
    ensemble_average_with, ensemble_steady, mean_radius, phase_diffusion_steady, single_trajectory, EnsembleOptions,
    SteadyWindow,
};
use thermalink::QubitState;

/// Route-specific settings shared by every point of a run.
#[derive(Clone, Debug)]
pub struct RouteOptions {
    pub trajectories: usize,
    pub dt: Option<f64>,
    pub burn_in: Option<f64>,
    pub window: Option<f64>,
    pub n_max: Option<usize>,
    pub levels: Option<usize>,
    pub r0: Option<f64>,
    pub bidirectional_exact: bool,
    pub execution: Execution,
}

impl RouteOptions {
    pub fn from_config(cfg: &Config) -> Self {
        RouteOptions {
            trajectories: cfg.stochastic.trajectories,
            dt: cfg.stochastic.dt,
            burn_in: cfg.stochastic.burn_in,
            window: cfg.stochastic.window,
            n_max: cfg.cfrac.n_max,
            levels: cfg.cfrac.levels,
            r0: cfg.phase_diffusion.r0,
            bidirectional_exact: cfg.bidirectional.exact,
            execution: Execution::Parallel,
        }
    }

    fn ensemble(&self, initial: Option<QubitState>) -> EnsembleOptions {
        EnsembleOptions { initial, dt: self.dt, execution: self.execution, ..EnsembleOptions::default() }
    }
}

impl Default for RouteOptions {
    fn default() -> Self {
        RouteOptions::from_config(&Config::default())
    }
}

fn from_exact(route: Route, p: &ModelParams, s: &SteadyStateResult) -> Result<Record, CliError> {
    let mut r = Record::new(route, p.clone()).with_state(s.qubit_state()?);
    r.diagnostics = RecordDiagnostics {
        residual: Some(s.diagnostics.residual),
        subspace_dim: Some(s.diagnostics.subspace_dim),
        cutoff: s.diagnostics.cutoff,
        ..RecordDiagnostics::default()
    };
    Ok(r)
}

fn from_cfrac(route: Route, p: &ModelParams, s: &CfracSolution) -> Record {
    let mut r = Record::new(route, p.clone()).with_state(&s.qubits);
    r.diagnostics = RecordDiagnostics {
        n_max: Some(s.n_max),
        converged: Some(s.converged),
        population_shift: s.population_shift.is_finite().then_some(s.population_shift),
        approximation: Some(format!("{:?}", s.approximation).to_lowercase()),
        ..RecordDiagnostics::default()
    };
    r
}

fn symmetric_gamma(p: &ModelParams) -> Result<f64, CliError> {
    Ok(p.symmetric_gamma()?)
}

/// Steady state of `p` on `route`.
pub fn solve_steady(route: Route, p: &ModelParams, seed: u64, o: &RouteOptions) -> Result<Record, CliError> {
    p.validate().map_err(|e| CliError::Config(e.to_string()))?;
    match route {
        Route::Exact => from_exact(route, p, &exact_steady_state(p)?),
        Route::Stochastic => {
            let window = match (o.burn_in, o.window) {
                (None, None) => None,
                (b, w) => {
                    let d = SteadyWindow::for_params(p);
                    Some(SteadyWindow { burn_in: b.unwrap_or(d.burn_in), window: w.unwrap_or(d.window) })
                }
            };
            let e = ensemble_steady(p, o.trajectories, seed, window, &o.ensemble(None))?;
            let mut r = Record::new(route, p.clone()).with_state(&e.state);
            r.populations = Some(e.mean.ts.into());
            r.seed = Some(seed);
            r.trajectories = Some(e.n_traj);
            r.diagnostics.stderr = Some(Populations::from(e.stderr.ts));
            r.diagnostics.dt = Some(e.dt);
            Ok(r)
        }
        Route::Bourret => {
            let b = bourret_steady(p)?;
            let mut r = Record::new(route, p.clone()).with_populations(b.full.populations, b.full.concurrence);
            r.diagnostics.approximation = Some("bourret-full".into());
            Ok(r)
        }
        Route::Cfrac => Ok(from_cfrac(route, p, &mcf_steady(p, o.n_max)?)),
        Route::Quasistatic => {
            let g = symmetric_gamma(p)?;
            let q = quasistatic_steady(p.phi() / g)?;
            Ok(Record::new(route, p.clone()).with_populations(q.populations, q.concurrence))
        }
        Route::Markov => {
            let m = markov_steady(p.n_th);
            Ok(Record::new(route, p.clone()).with_populations(m.populations, m.concurrence))
        }
        Route::PhaseDiffusion => {
            let r0 = o.r0.unwrap_or_else(|| mean_radius(p));
            let s = phase_diffusion_steady(p, r0)?;
            let mut r = Record::new(route, p.clone()).with_state(&s);
            r.r0 = Some(r0);
            Ok(r)
        }
        Route::Bidirectional => {
            if o.bidirectional_exact {
                let s = steady_state(&build_bidirectional_liouvillian(p)?)?;
                let mut r = from_exact(route, p, &s)?;
                r.diagnostics.approximation = Some("none".into());
                Ok(r)
            } else {
                Ok(from_cfrac(route, p, &bidirectional_phase_space_steady(p)?))
            }
        }
    }
}

pub fn initial_state(s: InitialState) -> Result<QubitState, CliError> {
    Ok(match s {
        InitialState::Ground => QubitState::pure(&ket(0, 0))?,
        InitialState::Singlet => QubitState::pure(&singlet())?,
        InitialState::Triplet => QubitState::pure(&triplet())?,
        InitialState::Excited => QubitState::pure(&ket(1, 1))?,
        InitialState::Mixed => QubitState::maximally_mixed(),
    })
}

fn series_record(route: Route, p: &ModelParams, t: f64, s: &QubitState) -> Record {
    let mut r = Record::new(route, p.clone()).with_state(s);
    r.t = Some(t);
    r
}

/// Time trace of the reduced state on `route`.
pub fn solve_evolve(
    route: Route,
    p: &ModelParams,
    initial: &QubitState,
    times: &[f64],
    seed: u64,
    o: &RouteOptions,
) -> Result<Vec<Record>, CliError> {
    p.validate().map_err(|e| CliError::Config(e.to_string()))?;
    match route {
        Route::Exact => {
            let ev = exact_evolve(p, initial, times)?;
            (0..ev.len())
                .map(|k| {
                    let mut r = series_record(route, p, times[k], &ev.qubit_state(k)?);
                    r.diagnostics.cutoff = Some(p.cutoff());
                    Ok(r)
                })
                .collect()
        }
        Route::Cfrac => {
            let g = PhaseSpaceGenerator::from_params(p)?;
            let levels = o.levels.unwrap_or_else(|| default_hierarchy_levels(p.n_th));
            let h = evolve_hierarchy(&g, levels, initial, times)?;
            Ok(h.times
                .iter()
                .zip(&h.states)
                .map(|(&t, s)| {
                    let mut r = series_record(route, p, t, s);
                    r.diagnostics.n_max = Some(h.n_max);
                    r
                })
                .collect())
        }
        Route::Stochastic => {
            let e = ensemble_average_with(p, o.trajectories, times, seed, &o.ensemble(Some(initial.clone())))?;
            Ok((0..e.times.len())
                .map(|k| {
                    let mut r = series_record(route, p, e.times[k], &e.states[k]);
                    r.populations = Some(e.mean[k].ts.into());
                    r.excitations = Some(e.mean[k].excitations);
                    r.seed = Some(seed);
                    r.trajectories = Some(e.n_traj);
                    r.diagnostics.stderr = Some(e.stderr[k].ts.into());
                    r.diagnostics.trace_defect = Some(e.trace_defect);
                    r.diagnostics.dt = Some(e.dt);
                    r
                })
                .collect())
        }
        other => {
            Err(CliError::Config(format!("route `{other}` has no time evolution (use exact, cfrac or stochastic)")))
        }
    }
}

/// One sampled field path and the conditional state it drives.
pub fn solve_trajectory(
    p: &ModelParams,
    initial: &QubitState,
    times: &[f64],
    seed: u64,
    o: &RouteOptions,
) -> Result<Vec<Record>, CliError> {
    p.validate().map_err(|e| CliError::Config(e.to_string()))?;
    let tr = single_trajectory(p, times, seed, 0, &o.ensemble(Some(initial.clone())))?;
    Ok((0..tr.times.len())
        .map(|k| {
            let mut r = series_record(Route::Stochastic, p, tr.times[k], &tr.states[k]);
            r.seed = Some(seed);
            r.trajectories = Some(1);
            r.alpha = Some([tr.alpha[k].re, tr.alpha[k].im]);
            r.diagnostics.dt = Some(tr.dt);
            r
        })
        .collect())
}

/// splitmix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of sweep point `index`; point 0 keeps the master seed.
pub fn point_seed(master: u64, index: usize) -> u64 {
    if index == 0 {
        master
    } else {
        splitmix64(master ^ splitmix64(index as u64))
    }
}

/// Parameter grid of a sweep in row-major order (last axis fastest).
pub fn sweep_points(cfg: &Config) -> Result<Vec<ModelParams>, CliError> {
    let base = cfg.params()?.clone();
    let sweep = cfg.sweep.as_ref().ok_or_else(|| CliError::Config("missing `sweep` section".into()))?;
    let mut points = vec![base];
    for axis in &sweep.axes {
        let grid = axis.grid()?;
        let mut next = Vec::with_capacity(points.len() * grid.len());
        for p in &points {
            for &v in &grid {
                let mut q = p.clone();
                crate::config::set_axis(&mut q, &axis.name, v)?;
                next.push(q);
            }
        }
        points = next;
    }
    Ok(points)
}

/// Solves every point; failures become records with an error column.
pub fn run_points(route: Route, points: &[ModelParams], seed: u64, o: &RouteOptions) -> (Vec<Record>, usize) {
    let records = map_indexed(points.len(), o.execution, |k| {
        let p = &points[k];
        let s = point_seed(seed, k);
        solve_steady(route, p, s, o).unwrap_or_else(|e| {
            let mut r = Record::failed(route, p.clone(), &e);
            if route == Route::Stochastic {
                r.seed = Some(s);
            }
            r
        })
    });
    let failed = records.iter().filter(|r| r.error.is_some()).count();
    (records, failed)
}
