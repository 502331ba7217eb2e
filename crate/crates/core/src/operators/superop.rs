use super::Operator;
use crate::linalg::SparseMatrix;
use crate::C64;
use nalgebra::DMatrix;
use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

/// Tensor structure of the Hilbert space a generator acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    /// Two qubits, dimension 4.
    Qubits,
    /// qubit₁ ⊗ qubit₂ ⊗ cavity with `cutoff` Fock levels.
    QubitsCavity {
        cutoff: usize,
    },
    /// Cavity alone.
    Cavity {
        cutoff: usize,
    },
    Generic,
}

#[derive(Clone, Debug)]
struct Term {
    coeff: C64,
    // Transposed left factor: row i lists the nonzeros of column i.
    left_t: Option<SparseMatrix>,
    right: Option<SparseMatrix>,
}

/// Linear map on D×D matrices, stored as a sum of sandwich terms c·AρB.
///
/// The matrix form acts on column-stacked density matrices,
/// vec(AρB) = (Bᵀ ⊗ A) vec(ρ), with element (i, j) at position j·D + i.
#[derive(Clone, Debug)]
pub struct Superoperator {
    dim: usize,
    layout: Layout,
    terms: Vec<Term>,
}

/// Subset of matrix elements closed under a generator.
#[derive(Clone, Debug)]
pub struct LiouvilleSubspace {
    dim: usize,
    elements: Vec<(usize, usize)>,
    index: HashMap<usize, usize>,
}

impl LiouvilleSubspace {
    pub fn full(dim: usize) -> Self {
        let elements: Vec<_> = (0..dim).flat_map(|j| (0..dim).map(move |i| (i, j))).collect();
        Self::from_elements(dim, elements)
    }

    pub fn from_elements(dim: usize, elements: Vec<(usize, usize)>) -> Self {
        let index = elements.iter().enumerate().map(|(k, &(i, j))| (j * dim + i, k)).collect();
        LiouvilleSubspace { dim, elements, index }
    }

    pub fn hilbert_dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[(usize, usize)] {
        &self.elements
    }

    pub fn position(&self, i: usize, j: usize) -> Option<usize> {
        self.index.get(&(j * self.dim + i)).copied()
    }

    /// Scatters subspace coordinates into a dense matrix.
    pub fn to_matrix(&self, v: &[C64]) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (k, &(i, j)) in self.elements.iter().enumerate() {
            m[(i, j)] = v[k];
        }
        m
    }

    /// Gathers subspace coordinates from a dense matrix.
    pub fn gather(&self, m: &DMatrix<C64>) -> Vec<C64> {
        self.elements.iter().map(|&(i, j)| m[(i, j)]).collect()
    }
}

impl Superoperator {
    pub fn zero(dim: usize, layout: Layout) -> Self {
        Superoperator { dim, layout, terms: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn with_layout(mut self, layout: Layout) -> Self {
        self.layout = layout;
        self
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Adds c·AρB; `None` stands for the identity.
    pub fn push_sandwich(&mut self, coeff: C64, left: Option<&Operator>, right: Option<&Operator>) {
        if coeff == C64::new(0.0, 0.0) {
            return;
        }
        for op in [left, right].into_iter().flatten() {
            assert_eq!(op.dim(), self.dim, "operator dimension mismatch");
        }
        let left_t = left.map(|a| a.sparse().transpose());
        let right = right.map(|b| b.sparse().clone());
        if left_t.as_ref().is_some_and(|m| m.nnz() == 0) || right.as_ref().is_some_and(|m| m.nnz() == 0) {
            return;
        }
        self.terms.push(Term { coeff, left_t, right });
    }

    pub fn sandwich(dim: usize, layout: Layout, coeff: C64, left: Option<&Operator>, right: Option<&Operator>) -> Self {
        let mut s = Self::zero(dim, layout);
        s.push_sandwich(coeff, left, right);
        s
    }

    /// −i[H, ·].
    pub fn hamiltonian(h: &Operator, layout: Layout) -> Self {
        let mut s = Self::zero(h.dim(), layout);
        s.push_sandwich(C64::new(0.0, -1.0), Some(h), None);
        s.push_sandwich(C64::new(0.0, 1.0), None, Some(h));
        s
    }

    /// rate·𝒟[A].
    pub fn dissipator(a: &Operator, rate: f64, layout: Layout) -> Self {
        Self::cross_dissipator(a, a, rate, layout)
    }

    /// rate·(XρY† − ½{Y†X, ρ}).
    pub fn cross_dissipator(x: &Operator, y: &Operator, rate: f64, layout: Layout) -> Self {
        let mut s = Self::zero(x.dim(), layout);
        if rate == 0.0 {
            return s;
        }
        let ydx = y.dagger().mul(x);
        s.push_sandwich(C64::new(rate, 0.0), Some(x), Some(&y.dagger()));
        s.push_sandwich(C64::new(-rate / 2.0, 0.0), Some(&ydx), None);
        s.push_sandwich(C64::new(-rate / 2.0, 0.0), None, Some(&ydx));
        s
    }

    pub fn add_assign(&mut self, other: Superoperator) {
        assert_eq!(self.dim, other.dim, "superoperator dimension mismatch");
        self.terms.extend(other.terms);
    }

    pub fn plus(mut self, other: Superoperator) -> Self {
        self.add_assign(other);
        self
    }

    pub fn scaled(mut self, c: C64) -> Self {
        self.terms.iter_mut().for_each(|t| t.coeff *= c);
        self.terms.retain(|t| t.coeff != C64::new(0.0, 0.0));
        self
    }

    /// 𝓛ρ for a dense D×D matrix.
    pub fn apply(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let d = self.dim;
        assert_eq!(rho.shape(), (d, d));
        let mut out = DMatrix::<C64>::zeros(d, d);
        for t in &self.terms {
            let right = match &t.right {
                None => rho.clone(),
                Some(b) => {
                    let mut m = DMatrix::<C64>::zeros(d, d);
                    for (j, q, v) in b.triplets() {
                        let src = rho.column(j);
                        let mut dst = m.column_mut(q);
                        dst.axpy(v, &src, C64::new(1.0, 0.0));
                    }
                    m
                }
            };
            match &t.left_t {
                None => out += right * t.coeff,
                Some(at) => {
                    for (i, p, v) in at.triplets() {
                        let c = t.coeff * v;
                        for q in 0..d {
                            let r = right[(i, q)];
                            out[(p, q)] += c * r;
                        }
                    }
                }
            }
        }
        out
    }

    /// 𝓛 applied to a column-stacked vector.
    pub fn apply_vec(&self, v: &[C64]) -> Vec<C64> {
        let rho = DMatrix::from_column_slice(self.dim, self.dim, v);
        self.apply(&rho).as_slice().to_vec()
    }

    /// Image of the basis element |i⟩⟨j|, with coinciding entries merged.
    pub fn basis_image(&self, i: usize, j: usize) -> Vec<((usize, usize), C64)> {
        let mut acc: Vec<((usize, usize), C64)> = Vec::new();
        let one = [(i, C64::new(1.0, 0.0))];
        let onej = [(j, C64::new(1.0, 0.0))];
        for t in &self.terms {
            let lefts: Vec<(usize, C64)> = match &t.left_t {
                None => one.to_vec(),
                Some(at) => at.row(i).collect(),
            };
            let rights: Vec<(usize, C64)> = match &t.right {
                None => onej.to_vec(),
                Some(b) => b.row(j).collect(),
            };
            for &(p, a) in &lefts {
                for &(q, b) in &rights {
                    acc.push(((p, q), t.coeff * a * b));
                }
            }
        }
        acc.sort_unstable_by_key(|a| (a.0 .1, a.0 .0));
        let mut merged: Vec<((usize, usize), C64)> = Vec::with_capacity(acc.len());
        for (k, v) in acc {
            match merged.last_mut() {
                Some((lk, lv)) if *lk == k => *lv += v,
                _ => merged.push((k, v)),
            }
        }
        merged.retain(|(_, v)| *v != C64::new(0.0, 0.0));
        merged
    }

    /// Smallest set of matrix elements containing `seeds` and closed under 𝓛.
    pub fn forward_closure(&self, seeds: &[(usize, usize)]) -> LiouvilleSubspace {
        let d = self.dim;
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut elements = Vec::new();
        let mut queue = VecDeque::new();
        for &(i, j) in seeds {
            if seen.insert(j * d + i, elements.len()).is_none() {
                elements.push((i, j));
                queue.push_back((i, j));
            }
        }
        while let Some((i, j)) = queue.pop_front() {
            for ((p, q), _) in self.basis_image(i, j) {
                if let Entry::Vacant(e) = seen.entry(q * d + p) {
                    e.insert(elements.len());
                    elements.push((p, q));
                    queue.push_back((p, q));
                }
            }
        }
        LiouvilleSubspace { dim: d, elements, index: seen }
    }

    /// Closure of all populations |i⟩⟨i|; holds every stationary state.
    pub fn population_closure(&self) -> LiouvilleSubspace {
        let seeds: Vec<_> = (0..self.dim).map(|i| (i, i)).collect();
        self.forward_closure(&seeds)
    }

    /// Matrix of 𝓛 restricted to a closed subspace. Images leaving the subspace
    /// are reported through the returned leak magnitude.
    pub fn restrict(&self, space: &LiouvilleSubspace) -> (SparseMatrix, f64) {
        let mut t = Vec::new();
        let mut leak: f64 = 0.0;
        for (col, &(i, j)) in space.elements.iter().enumerate() {
            for ((p, q), v) in self.basis_image(i, j) {
                match space.position(p, q) {
                    Some(row) => t.push((row, col, v)),
                    None => leak = leak.max(v.norm()),
                }
            }
        }
        (SparseMatrix::from_triplets(space.len(), space.len(), t), leak)
    }

    /// Sparse D²×D² matrix in the column-stacked convention.
    pub fn to_sparse(&self) -> SparseMatrix {
        let d = self.dim;
        let mut t = Vec::new();
        for j in 0..d {
            for i in 0..d {
                for ((p, q), v) in self.basis_image(i, j) {
                    t.push((q * d + p, j * d + i, v));
                }
            }
        }
        SparseMatrix::from_triplets(d * d, d * d, t)
    }

    /// Dense D²×D² matrix in the column-stacked convention.
    pub fn to_dense(&self) -> DMatrix<C64> {
        self.to_sparse().to_dense()
    }

    /// Largest entrywise difference of the matrix forms.
    pub fn max_abs_diff(&self, other: &Superoperator) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.to_sparse().max_abs_diff(&other.to_sparse())
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.to_sparse().max_abs()
    }
}
