use crate::{Error, Result, C64};
use nalgebra::{DMatrix, Matrix4};

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const NEGATIVITY_TOL: f64 = 1e-9;

/// Two-qubit density matrix in the basis |00⟩, |01⟩, |10⟩, |11⟩.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitState {
    m: Matrix4<C64>,
}

impl QubitState {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(m: Matrix4<C64>) -> Result<Self> {
        let herm = (m - m.adjoint()).iter().fold(0.0f64, |a, z| a.max(z.norm()));
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("non-Hermitian (defect {herm:e})")));
        }
        let tr = m.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let s = QubitState { m };
        let min = s.eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -NEGATIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(s)
    }

    /// Accepts a numerically produced matrix after symmetrizing it and fixing the trace.
    pub fn from_numerical(m: &DMatrix<C64>) -> Result<Self> {
        if m.shape() != (4, 4) {
            return Err(Error::DimensionMismatch(format!("expected 4x4, got {:?}", m.shape())));
        }
        let mut s = Matrix4::from_fn(|i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
        let tr = s.trace().re;
        if !(tr.is_finite() && tr > 0.0) {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        s /= C64::new(tr, 0.0);
        Self::new(s)
    }

    pub fn from_dmatrix(m: &DMatrix<C64>) -> Result<Self> {
        if m.shape() != (4, 4) {
            return Err(Error::DimensionMismatch(format!("expected 4x4, got {:?}", m.shape())));
        }
        Self::new(Matrix4::from_fn(|i, j| m[(i, j)]))
    }

    /// Pure state |ψ⟩⟨ψ| after normalizing ψ.
    pub fn pure(psi: &[C64; 4]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        let v: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Self::new(Matrix4::from_fn(|i, j| v[i] * v[j].conj()))
    }

    pub fn maximally_mixed() -> Self {
        QubitState { m: Matrix4::identity() * C64::new(0.25, 0.0) }
    }

    /// Diagonal state in the triplet–singlet basis.
    pub fn from_ts_populations(p: [f64; 4]) -> Result<Self> {
        use crate::operators::{ket, singlet, triplet};
        let vecs = [ket(0, 0), triplet(), singlet(), ket(1, 1)];
        let mut m = Matrix4::zeros();
        for (w, v) in p.iter().zip(vecs.iter()) {
            for i in 0..4 {
                for j in 0..4 {
                    m[(i, j)] += v[i] * v[j].conj() * *w;
                }
            }
        }
        Self::new(m)
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.m
    }

    pub fn to_dmatrix(&self) -> DMatrix<C64> {
        DMatrix::from_fn(4, 4, |i, j| self.m[(i, j)])
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let e = self.m.symmetric_eigen().eigenvalues;
        let mut v = [e[0], e[1], e[2], e[3]];
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    /// Populations of |00⟩, |01⟩, |10⟩, |11⟩.
    pub fn basis_populations(&self) -> [f64; 4] {
        [self.m[(0, 0)].re, self.m[(1, 1)].re, self.m[(2, 2)].re, self.m[(3, 3)].re]
    }

    /// Excited-state populations of qubit 1 and qubit 2.
    pub fn excitations(&self) -> [f64; 2] {
        let p = self.basis_populations();
        [p[2] + p[3], p[1] + p[3]]
    }

    /// (ρ₀₀, ρ_T, ρ_S, ρ₁₁).
    pub fn ts_populations(&self) -> [f64; 4] {
        crate::operators::triplet_singlet_transform(self).populations()
    }

    /// Applies U ρ U†.
    pub fn transformed(&self, u: &Matrix4<C64>) -> Result<Self> {
        Self::new(u * self.m * u.adjoint())
    }

    pub fn concurrence(&self) -> f64 {
        concurrence(self)
    }
}

/// Wootters concurrence max{0, λ₁ − λ₂ − λ₃ − λ₄}, with λᵢ the square roots of
/// the eigenvalues of √ρ ρ̃ √ρ and ρ̃ = (σʸ⊗σʸ) ρ* (σʸ⊗σʸ).
pub fn concurrence(state: &QubitState) -> f64 {
    let m = state.matrix();
    let eig = m.symmetric_eigen();
    let sqrt_vals = eig.eigenvalues.map(|l| if l > 0.0 { l.sqrt() } else { 0.0 });
    let u = eig.eigenvectors;
    let sqrt_rho = u * Matrix4::from_diagonal(&sqrt_vals.map(|x| C64::new(x, 0.0))) * u.adjoint();
    // σʸ⊗σʸ is the antidiagonal (−1, 1, 1, −1).
    let yy = Matrix4::from_fn(|i, j| {
        if i + j == 3 {
            C64::new(if i == 0 || i == 3 { -1.0 } else { 1.0 }, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let tilde = yy * m.conjugate() * yy;
    let r = sqrt_rho * tilde * sqrt_rho;
    let r = (r + r.adjoint()) * C64::new(0.5, 0.0);
    let mut l: Vec<f64> = r.symmetric_eigen().eigenvalues.iter().map(|x| x.max(0.0).sqrt()).collect();
    l.sort_by(|a, b| b.partial_cmp(a).unwrap());
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

/// Concurrence of a state diagonal in {|00⟩, |T⟩, |S⟩, |11⟩} with dominant singlet.
pub fn x_form_concurrence(rho_00: f64, rho_t: f64, rho_s: f64, rho_11: f64) -> f64 {
    (rho_s - rho_t - 2.0 * (rho_00 * rho_11).max(0.0).sqrt()).max(0.0)
}

/// Traces out the trailing cavity factor of a (4·N)×(4·N) matrix.
pub fn partial_trace_cavity(full: &DMatrix<C64>, cutoff: usize) -> Result<QubitState> {
    QubitState::from_numerical(&partial_trace_raw(full, cutoff)?)
}

/// As [`partial_trace_cavity`] without validation of the result.
pub fn partial_trace_raw(full: &DMatrix<C64>, cutoff: usize) -> Result<DMatrix<C64>> {
    if full.nrows() != 4 * cutoff || full.ncols() != 4 * cutoff {
        return Err(Error::DimensionMismatch(format!(
            "state is {}x{}, expected {} = 4 x {cutoff}",
            full.nrows(),
            full.ncols(),
            4 * cutoff
        )));
    }
    Ok(DMatrix::from_fn(4, 4, |a, b| (0..cutoff).map(|n| full[(a * cutoff + n, b * cutoff + n)]).sum()))
}
