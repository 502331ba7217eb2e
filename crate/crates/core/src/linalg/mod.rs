//! Sparse storage, banded factorization and bandwidth-reducing orderings.

mod banded;
mod ordering;
mod sparse;

pub use banded::{BandMatrix, BandedLu};
pub use ordering::reverse_cuthill_mckee;
pub use sparse::SparseMatrix;

use crate::C64;
use nalgebra::DMatrix;

/// Column-stacking vectorization of a square matrix.
pub fn vec_col(m: &DMatrix<C64>) -> Vec<C64> {
    m.as_slice().to_vec()
}

/// Inverse of [`vec_col`].
pub fn unvec_col(v: &[C64], dim: usize) -> DMatrix<C64> {
    assert_eq!(v.len(), dim * dim);
    DMatrix::from_column_slice(dim, dim, v)
}

/// Largest entry modulus.
pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Trace norm distance ½‖a − b‖₁ for Hermitian arguments.
pub fn trace_distance(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    let d = a - b;
    let h = (&d + d.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    0.5 * eig.eigenvalues.iter().map(|x| x.abs()).sum::<f64>()
}

/// Fidelity ⟨ψ|ρ|ψ⟩ of a pure state with a density matrix.
pub fn pure_fidelity(psi: &[C64], rho: &DMatrix<C64>) -> f64 {
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..psi.len() {
        for j in 0..psi.len() {
            acc += psi[i].conj() * rho[(i, j)] * psi[j];
        }
    }
    acc.re
}
