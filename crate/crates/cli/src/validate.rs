//! Cross-route consistency checks with PASS/FAIL reporting.

use crate::error::CliError;
use std::io::Write;
use thermalink::analytic::{markov_steady, quasistatic_steady};
use thermalink::bidirectional::{bidirectional_phase_space_steady, build_bidirectional_liouvillian};
use thermalink::cfrac::{closed_form_populations, mcf_steady, three_level_cf_steady};
use thermalink::operators::ModelParams;
use thermalink::parallel::Execution;
use thermalink::solvers::{exact_steady_state, steady_state};
use thermalink::stochastic::{ensemble_steady, phase_diffusion_rate, EnsembleOptions};

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn check(name: &'static str, value: f64, tolerance: f64) -> Check {
    Check { name, value, tolerance, pass: value.is_finite() && value <= tolerance }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn run(name: &'static str, tol: f64, f: impl FnOnce() -> thermalink::Result<f64>) -> Check {
    check(name, f().unwrap_or(f64::NAN), tol)
}

/// Runs the suite. `trajectories` sets the stochastic sample size.
pub fn run_checks(seed: u64, trajectories: usize, execution: Execution) -> Vec<Check> {
    let mut out = Vec::new();
    out.push(run("markov n_th=1 populations (4,2,2,1)/9", 1e-12, || {
        Ok(max_diff(&markov_steady(1.0).populations, &[4.0 / 9.0, 2.0 / 9.0, 2.0 / 9.0, 1.0 / 9.0]))
    }));
    out.push(run("quasistatic concurrence at zero flux", 1e-15, || Ok(quasistatic_steady(0.0)?.concurrence)));
    out.push(run("exact vs cfrac at n_th=5, kappa=0.01", 1e-6, || {
        let p = ModelParams::symmetric(1.0, 0.01, 5.0);
        let e = exact_steady_state(&p)?;
        let m = mcf_steady(&p, None)?;
        Ok(max_diff(&e.qubit_state()?.ts_populations(), &m.populations))
    }));
    out.push(run("three-level continued fraction vs closed form", 1e-10, || {
        let p = ModelParams::symmetric(1.0, 1e-3, 1220.0);
        let cf = three_level_cf_steady(&p, 1024)?;
        let (s, t) = closed_form_populations(&p)?.corrected;
        Ok((cf.rho_s - s).abs().max((cf.rho_t - t).abs()))
    }));
    out.push(run("phase diffusion rate at r0^2 = n_th/2 equals kappa/4", 1e-15, || {
        let p = ModelParams::symmetric(1.0, 0.01, 100.0);
        Ok((phase_diffusion_rate(&p, 50f64.sqrt())? - 0.0025).abs())
    }));
    out.push(run("bidirectional phase-space vs exact at n_th=5", 2e-3, || {
        let p = ModelParams::symmetric(1.0, 0.01, 5.0)
            .with_positions(2.0 * std::f64::consts::PI, 4.0 * std::f64::consts::PI)
            .with_detunings(0.5, -0.5);
        let e = steady_state(&build_bidirectional_liouvillian(&p)?)?;
        let m = bidirectional_phase_space_steady(&p)?;
        Ok((e.concurrence.unwrap_or(f64::NAN) - m.concurrence).abs())
    }));
    out.push(run("stochastic vs exact singlet population in standard errors", 3.0, || {
        let p = ModelParams::symmetric(1.0, 0.01, 5.0);
        let e = exact_steady_state(&p)?.qubit_state()?.ts_populations();
        let opts = EnsembleOptions { execution, ..EnsembleOptions::default() };
        let s = ensemble_steady(&p, trajectories, seed, None, &opts)?;
        Ok((s.mean.ts[2] - e[2]).abs() / s.stderr.ts[2])
    }));
    out
}

pub fn report<W: Write>(checks: &[Check], mut out: W) -> Result<usize, CliError> {
    let mut failed = 0;
    for c in checks {
        if !c.pass {
            failed += 1;
        }
        writeln!(
            out,
            "{} {}: {:.6e} (tolerance {:.1e})",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.value,
            c.tolerance
        )?;
    }
    Ok(failed)
}
