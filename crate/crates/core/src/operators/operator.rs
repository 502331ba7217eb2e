use crate::linalg::SparseMatrix;
use crate::C64;
use nalgebra::DMatrix;

/// Square operator on a finite Hilbert space.
///
/// Entries are held sparsely; [`Operator::entries`] returns the dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    m: SparseMatrix,
}

impl Operator {
    pub fn from_sparse(m: SparseMatrix) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "operator must be square");
        Operator { m }
    }

    pub fn from_dense(m: &DMatrix<C64>) -> Self {
        Self::from_sparse(SparseMatrix::from_dense(m))
    }

    pub fn from_triplets(dim: usize, t: Vec<(usize, usize, C64)>) -> Self {
        Self::from_sparse(SparseMatrix::from_triplets(dim, dim, t))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_sparse(SparseMatrix::identity(dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_sparse(SparseMatrix::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn sparse(&self) -> &SparseMatrix {
        &self.m
    }

    pub fn entries(&self) -> DMatrix<C64> {
        self.m.to_dense()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.m.get(i, j)
    }

    pub fn dagger(&self) -> Self {
        Self::from_sparse(self.m.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self::from_sparse(self.m.transpose())
    }

    pub fn conj(&self) -> Self {
        Self::from_sparse(self.m.conj())
    }

    pub fn mul(&self, rhs: &Operator) -> Self {
        Self::from_sparse(self.m.matmul(&rhs.m))
    }

    pub fn add(&self, rhs: &Operator) -> Self {
        Self::from_sparse(self.m.add(&rhs.m))
    }

    pub fn sub(&self, rhs: &Operator) -> Self {
        Self::from_sparse(self.m.add(&rhs.m.scale(C64::new(-1.0, 0.0))))
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::from_sparse(self.m.scale(c))
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    pub fn kron(&self, rhs: &Operator) -> Self {
        Self::from_sparse(self.m.kron(&rhs.m))
    }

    /// `self · v` for a state vector.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        self.m.matvec(v)
    }

    /// max |A − A†|.
    pub fn hermiticity_defect(&self) -> f64 {
        self.m.max_abs_diff(&self.m.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        self.m.max_abs_diff(&other.m)
    }
}
