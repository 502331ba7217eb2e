use super::ode::{integrate, Tolerances};
use super::QubitState;
use crate::operators::{Layout, LiouvilleSubspace, Superoperator};
use crate::{Error, Result, C64};
use nalgebra::DMatrix;

const TRACE_DRIFT_TOL: f64 = 1e-8;

/// States on a time grid, stored on the subspace reachable from the initial state.
#[derive(Clone, Debug)]
pub struct Evolution {
    pub times: Vec<f64>,
    space: LiouvilleSubspace,
    layout: Layout,
    states: Vec<Vec<C64>>,
}

impl Evolution {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn density_matrix(&self, k: usize) -> DMatrix<C64> {
        self.space.to_matrix(&self.states[k])
    }

    /// Reduced two-qubit state at output `k`.
    pub fn qubit_state(&self, k: usize) -> Result<QubitState> {
        let st = super::SubspaceState::new(self.space.clone(), self.states[k].clone());
        match self.layout {
            Layout::QubitsCavity { cutoff } => QubitState::from_numerical(&st.reduced_qubits_raw(cutoff)?),
            Layout::Qubits => QubitState::from_numerical(&st.density_matrix()),
            _ => Err(Error::DimensionMismatch("generator has no qubit factor".into())),
        }
    }

    pub fn concurrence(&self, k: usize) -> Result<f64> {
        Ok(self.qubit_state(k)?.concurrence())
    }
}

/// Integrates ρ̇ = 𝓛ρ from `rho0` and records ρ at every time of `t_grid`.
pub fn evolve(l: &Superoperator, rho0: &DMatrix<C64>, t_grid: &[f64]) -> Result<Evolution> {
    evolve_with(l, rho0, t_grid, Tolerances::default())
}

pub fn evolve_with(l: &Superoperator, rho0: &DMatrix<C64>, t_grid: &[f64], tol: Tolerances) -> Result<Evolution> {
    let d = l.dim();
    if rho0.shape() != (d, d) {
        return Err(Error::DimensionMismatch(format!("initial state {:?}, generator dimension {d}", rho0.shape())));
    }
    let herm = (rho0 - rho0.adjoint()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let tr0 = rho0.trace();
    if herm > 1e-10 || (tr0 - C64::new(1.0, 0.0)).norm() > 1e-10 {
        return Err(Error::InvalidState("initial state must be Hermitian with unit trace".into()));
    }
    let mut seeds = Vec::new();
    for j in 0..d {
        for i in 0..d {
            if rho0[(i, j)] != C64::new(0.0, 0.0) {
                seeds.push((i, j));
            }
        }
    }
    let space = l.forward_closure(&seeds);
    let (a, _) = l.restrict(&space);
    let diag: Vec<usize> = (0..space.len()).filter(|&k| space.elements()[k].0 == space.elements()[k].1).collect();
    let y0 = space.gather(rho0);
    let mut states = Vec::with_capacity(t_grid.len());
    integrate(
        |_, y, dy| {
            dy.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
            a.matvec_add(y, dy);
        },
        &y0,
        t_grid,
        tol,
        |k, y| {
            let tr: C64 = diag.iter().map(|&m| y[m]).sum();
            if (tr - tr0).norm() > TRACE_DRIFT_TOL {
                return Err(Error::NonConvergence(format!("trace drift {:e} at t = {}", (tr - tr0).norm(), t_grid[k])));
            }
            states.push(y.to_vec());
            Ok(())
        },
    )?;
    Ok(Evolution { times: t_grid.to_vec(), space, layout: l.layout(), states })
}
