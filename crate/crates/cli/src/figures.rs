//! Data bundles behind the published figures.

use crate::config::InitialState;
use crate::config::{Format, Route};
use crate::error::CliError;
use crate::record::{write_records, Record};
use crate::run::{initial_state, point_seed, solve_evolve, solve_steady, RouteOptions};
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use thermalink::analytic::{bourret_steady, kappa_max};
use thermalink::cfrac::closed_form_concurrence;
use thermalink::operators::ModelParams;
use thermalink::parallel::map_indexed;
use thermalink::stochastic::propagate_constant;
use thermalink::C64;

pub const FIGURES: [&str; 11] =
    ["fig2c", "fig2d", "fig3a", "fig3b", "fig3c", "fig4a", "fig4b", "fig4c", "fig4d", "fig7a", "fig7b"];

/// Thermal occupations of the time traces at fixed κ = 10⁻³γ.
pub const FIG4A_OCCUPATIONS: [f64; 4] = [100.0, 300.0, 1220.0, 3000.0];

/// Dephasing rates 1/T_φ of the time-trace panels.
pub const DEPHASING_RATES: [f64; 4] = [0.0, 1.59e-4, 1.59e-3, 1.59e-2];

#[derive(Clone, Debug)]
enum Job {
    Steady { route: Route, params: ModelParams, series: String },
    Evolve { route: Route, params: ModelParams, series: String, times: Vec<f64> },
    Coherent { params: ModelParams, series: String, times: Vec<f64> },
    BourretLowest { params: ModelParams, series: String },
    ClosedForm { params: ModelParams, series: String },
    KappaMax { params: ModelParams, series: String },
}

impl Job {
    fn route(&self) -> Route {
        match self {
            Job::Steady { route, .. } | Job::Evolve { route, .. } => *route,
            Job::Coherent { .. } => Route::Stochastic,
            Job::BourretLowest { .. } | Job::KappaMax { .. } => Route::Bourret,
            Job::ClosedForm { .. } => Route::Cfrac,
        }
    }

    fn params(&self) -> &ModelParams {
        match self {
            Job::Steady { params, .. }
            | Job::Evolve { params, .. }
            | Job::Coherent { params, .. }
            | Job::BourretLowest { params, .. }
            | Job::ClosedForm { params, .. }
            | Job::KappaMax { params, .. } => params,
        }
    }

    fn series(&self) -> &str {
        match self {
            Job::Steady { series, .. }
            | Job::Evolve { series, .. }
            | Job::Coherent { series, .. }
            | Job::BourretLowest { series, .. }
            | Job::ClosedForm { series, .. }
            | Job::KappaMax { series, .. } => series,
        }
    }

    fn run(&self, seed: u64, o: &RouteOptions) -> Result<Vec<Record>, CliError> {
        let ground = initial_state(InitialState::Ground)?;
        let recs = match self {
            Job::Steady { route, params, .. } => vec![solve_steady(*route, params, seed, o)?],
            Job::Evolve { route, params, times, .. } => solve_evolve(*route, params, &ground, times, seed, o)?,
            Job::Coherent { params, times, .. } => {
                let a0 = C64::from(params.cavity_occupation().sqrt());
                let states = propagate_constant(params, a0, times, &ground, o.dt)?;
                times
                    .iter()
                    .zip(&states)
                    .map(|(&t, s)| {
                        let mut r = Record::new(Route::Stochastic, params.clone()).with_state(s);
                        r.t = Some(t);
                        r.alpha = Some([a0.re, a0.im]);
                        r
                    })
                    .collect()
            }
            Job::BourretLowest { params, .. } => {
                let b = bourret_steady(params)?;
                let mut r = Record::new(Route::Bourret, params.clone())
                    .with_populations(b.lowest.populations, b.lowest.concurrence);
                r.diagnostics.approximation = Some("bourret-lowest".into());
                vec![r]
            }
            Job::ClosedForm { params, .. } => {
                let mut r = Record::new(Route::Cfrac, params.clone());
                r.concurrence = Some(closed_form_concurrence(params)?);
                r.diagnostics.approximation = Some("closed-form".into());
                vec![r]
            }
            Job::KappaMax { params, .. } => {
                let k = kappa_max(params)?;
                let mut p = params.clone();
                p.kappa = k;
                let mut r = Record::new(Route::Bourret, p);
                r.concurrence = Some(0.0);
                r.diagnostics.approximation = Some("kappa-max".into());
                vec![r]
            }
        };
        Ok(recs.into_iter().map(|r| r.series(self.series())).collect())
    }
}

fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| 10f64.powf(a + (b - a) * k as f64 / (n - 1) as f64)).collect()
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

fn sym(kappa: f64, n_th: f64) -> ModelParams {
    ModelParams::symmetric(1.0, kappa, n_th)
}

fn steady(route: Route, params: ModelParams, series: &str) -> Job {
    Job::Steady { route, params, series: series.into() }
}

/// Narrow-band working point of the time-trace panels: κ = 10⁻³γ, n_th = 1220.
fn working_point() -> ModelParams {
    sym(1e-3, 1220.0)
}

fn tables(name: &str) -> Result<Vec<(&'static str, Vec<Job>)>, CliError> {
    let t = match name {
        "fig2c" => {
            let mut grid = Vec::new();
            let mut edge = Vec::new();
            for &n in &linspace(0.0, 10.0, 21) {
                for &k in &logspace(-3.0, 0.0, 13) {
                    grid.push(steady(Route::Exact, sym(k, n), "exact"));
                }
                if n > 0.0 {
                    edge.push(Job::KappaMax { params: sym(1.0, n), series: "kappa_max".into() });
                }
            }
            vec![("concurrence", grid), ("kappa_max", edge)]
        }
        "fig2d" => {
            let mut jobs = Vec::new();
            for &k in &logspace(-3.0, 1.0, 25) {
                jobs.push(steady(Route::Exact, sym(k, 2.0), "exact"));
                jobs.push(steady(Route::Bourret, sym(k, 2.0), "bourret-full"));
                jobs.push(Job::BourretLowest { params: sym(k, 2.0), series: "bourret-lowest".into() });
            }
            vec![("concurrence", jobs)]
        }
        "fig3a" => {
            let mut jobs = Vec::new();
            for &phi in &logspace(-2.0, 1.0, 13) {
                jobs.push(steady(Route::Quasistatic, sym(1e-2, 2.0 * phi / 1e-2), "quasistatic"));
                for &k in &[1e-2, 1e-3, 1e-4] {
                    let p = sym(k, 2.0 * phi / k);
                    jobs.push(steady(Route::Cfrac, p.clone(), "cfrac"));
                    jobs.push(Job::ClosedForm { params: p, series: "closed-form".into() });
                }
            }
            vec![("concurrence", jobs)]
        }
        "fig3b" => {
            // Single qubit (γ₂ = 0) at Φ = 10γ.
            let single = |k: f64| ModelParams { gamma2: 0.0, ..sym(k, 20.0 / k) };
            let times = linspace(0.0, 10.0, 101);
            let mut jobs = Vec::new();
            for &k in &[1e-1, 1e-2, 1e-3] {
                jobs.push(Job::Evolve {
                    route: Route::Stochastic,
                    params: single(k),
                    series: "thermal".into(),
                    times: times.clone(),
                });
            }
            jobs.push(Job::Coherent { params: single(1e-3), series: "coherent".into(), times });
            vec![("excitation", jobs)]
        }
        "fig3c" => {
            let mut jobs = Vec::new();
            for &k in &logspace(-3.0, 0.0, 13) {
                let p = sym(k, 20.0 / k);
                jobs.push(steady(Route::Bourret, p.clone(), "bourret-full"));
                jobs.push(steady(Route::PhaseDiffusion, p.clone(), "phase-diffusion"));
                jobs.push(steady(Route::Cfrac, p, "cfrac"));
            }
            vec![("concurrence", jobs)]
        }
        "fig4a" => {
            let times = linspace(0.0, 200.0, 401);
            let jobs = FIG4A_OCCUPATIONS
                .iter()
                .map(|&n| Job::Evolve {
                    route: Route::Cfrac,
                    params: sym(1e-3, n),
                    series: "hierarchy".into(),
                    times: times.clone(),
                })
                .collect();
            vec![("concurrence", jobs)]
        }
        "fig4b" => {
            let times = linspace(0.0, 200.0, 401);
            let jobs = DEPHASING_RATES
                .iter()
                .map(|&g| Job::Evolve {
                    route: Route::Cfrac,
                    params: working_point().with_dephasing(g),
                    series: "hierarchy".into(),
                    times: times.clone(),
                })
                .collect();
            vec![("concurrence", jobs)]
        }
        "fig4c" => {
            let mut jobs = Vec::new();
            for &g2 in &linspace(0.5, 1.5, 11) {
                for &ds in &linspace(-0.1, 0.1, 11) {
                    let mut p = working_point().with_detunings(ds, ds);
                    p.gamma2 = g2;
                    jobs.push(steady(Route::Cfrac, p, "cfrac"));
                }
            }
            vec![("concurrence", jobs)]
        }
        "fig4d" => {
            let mut jobs = Vec::new();
            for &k in &[1e-2, 1e-3, 1e-4] {
                for &pl in &linspace(0.0, 0.5, 11) {
                    jobs.push(steady(Route::Cfrac, sym(k, 1220.0).with_loss(pl), "cfrac"));
                }
            }
            vec![("concurrence", jobs)]
        }
        "fig7a" => {
            let base = |n: f64| sym(1e-2, n).with_positions(2.0 * PI, 4.0 * PI).with_detunings(0.5, -0.5);
            let mut jobs = Vec::new();
            for &n in &logspace(0.0, 4.0, 17) {
                jobs.push(steady(Route::Bidirectional, base(n), "phase-space"));
            }
            let exact = vec![1.0, 2.0, 5.0, 10.0, 20.0, 50.0];
            let exact_jobs = exact.into_iter().map(|n| steady(Route::Bidirectional, base(n), "exact")).collect();
            vec![("concurrence", jobs), ("exact", exact_jobs)]
        }
        "fig7b" => {
            let mut jobs = Vec::new();
            for &z1 in &linspace(0.0, 2.0 * PI, 13) {
                for &z2 in &linspace(0.0, 2.0 * PI, 13) {
                    let p = sym(1e-2, 2000.0).with_positions(z1, z2).with_detunings(0.5, -0.5);
                    jobs.push(steady(Route::Bidirectional, p, "phase-space"));
                }
            }
            vec![("concurrence", jobs)]
        }
        other => {
            return Err(CliError::Config(format!("unknown figure `{other}` (expected one of {})", FIGURES.join(", "))))
        }
    };
    Ok(t)
}

/// Output of one figure: file stem and records per table.
pub struct FigureData {
    pub name: String,
    pub tables: Vec<(String, Vec<Record>)>,
    pub failed: usize,
}

/// Computes every table of figure `name`.
pub fn compute_figure(name: &str, seed: u64, o: &RouteOptions) -> Result<FigureData, CliError> {
    let tabs = tables(name)?;
    let jobs: Vec<(usize, Job)> =
        tabs.iter().enumerate().flat_map(|(i, (_, js))| js.iter().cloned().map(move |j| (i, j))).collect();
    let mut local = o.clone();
    if name == "fig7a" {
        local.bidirectional_exact = false;
    }
    let exact_opts = RouteOptions { bidirectional_exact: true, ..local.clone() };
    let results = map_indexed(jobs.len(), o.execution, |k| {
        let (table, job) = &jobs[k];
        let opts = if name == "fig7a" && tabs[*table].0 == "exact" { &exact_opts } else { &local };
        job.run(point_seed(seed, k), opts)
            .unwrap_or_else(|e| vec![Record::failed(job.route(), job.params().clone(), &e).series(job.series())])
    });
    let mut tables: Vec<(String, Vec<Record>)> = tabs.iter().map(|(n, _)| (n.to_string(), Vec::new())).collect();
    let mut failed = 0;
    for ((table, _), recs) in jobs.iter().zip(results) {
        failed += recs.iter().filter(|r| r.error.is_some()).count();
        tables[*table].1.extend(recs);
    }
    Ok(FigureData { name: name.to_string(), tables, failed })
}

/// Writes `<dir>/<figure>_<table>.<ext>` for every table and returns the paths.
pub fn write_figure(data: &FigureData, dir: &Path, format: Format) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir)?;
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let mut paths = Vec::new();
    for (table, recs) in &data.tables {
        let path = dir.join(format!("{}_{}.{}", data.name, table, ext));
        let file = std::io::BufWriter::new(std::fs::File::create(&path)?);
        write_records(recs, format, file)?;
        paths.push(path);
    }
    Ok(paths)
}
