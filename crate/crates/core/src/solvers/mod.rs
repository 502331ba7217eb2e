//! Steady states, time evolution, reduced states and concurrence.

mod evolve;
pub mod ode;
mod state;
mod steady;

pub use evolve::{evolve, evolve_with, Evolution};
pub use state::{concurrence, partial_trace_cavity, partial_trace_raw, x_form_concurrence, QubitState};
pub use steady::{steady_state, Diagnostics, SteadyStateResult, SubspaceState};

use crate::operators::{build_full_liouvillian, ModelParams};
use crate::Result;

/// Steady state of the full cascaded network on the Fock-space route.
pub fn exact_steady_state(params: &ModelParams) -> Result<SteadyStateResult> {
    steady_state(&build_full_liouvillian(params)?)
}

/// ρ_q ⊗ ρ_th with the cavity in its stationary thermal state (renormalized on the cutoff).
pub fn thermal_product_state(p: &ModelParams, qubits: &QubitState) -> nalgebra::DMatrix<crate::C64> {
    let n = p.cutoff();
    let nbar = p.cavity_occupation();
    let ratio = nbar / (nbar + 1.0);
    let mut w: Vec<f64> = (0..n).map(|k| ratio.powi(k as i32)).collect();
    let z: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= z);
    let q = qubits.matrix();
    nalgebra::DMatrix::from_fn(4 * n, 4 * n, |r, c| {
        let (qi, ni) = (r / n, r % n);
        let (qj, nj) = (c / n, c % n);
        if ni == nj {
            q[(qi, qj)] * w[ni]
        } else {
            crate::C64::new(0.0, 0.0)
        }
    })
}

/// Time evolution of the full network from ρ_q ⊗ ρ_th.
pub fn exact_evolve(p: &ModelParams, qubits: &QubitState, t_grid: &[f64]) -> Result<Evolution> {
    let l = build_full_liouvillian(p)?;
    evolve(&l, &thermal_product_state(p, qubits), t_grid)
}
