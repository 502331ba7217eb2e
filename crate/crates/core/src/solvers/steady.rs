use super::QubitState;
use crate::linalg::{reverse_cuthill_mckee, BandMatrix, SparseMatrix};
use crate::operators::{Layout, LiouvilleSubspace, Operator, Superoperator};
use crate::{Error, Result, C64};
use nalgebra::DMatrix;

const RESIDUAL_TOL: f64 = 1e-8;
const TRACE_PRESERVATION_TOL: f64 = 1e-10;
const PIVOT_TOL: f64 = 1e-13;
const PIVOT_CANDIDATES: usize = 8;

/// Solver diagnostics attached to every steady state.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics {
    /// max |𝓛ρ| over the solved subspace.
    pub residual: f64,
    /// max |𝓛| entry on the solved subspace.
    pub generator_norm: f64,
    /// Number of matrix elements in the population closure.
    pub subspace_dim: usize,
    /// Lower and upper bandwidth after reordering.
    pub bandwidth: (usize, usize),
    pub cutoff: Option<usize>,
    /// Population of the highest retained Fock level.
    pub top_fock_population: Option<f64>,
}

/// Matrix-element representation of a density matrix on a closed subspace.
#[derive(Clone, Debug)]
pub struct SubspaceState {
    space: LiouvilleSubspace,
    values: Vec<C64>,
}

impl SubspaceState {
    pub fn new(space: LiouvilleSubspace, values: Vec<C64>) -> Self {
        assert_eq!(space.len(), values.len());
        SubspaceState { space, values }
    }

    pub fn space(&self) -> &LiouvilleSubspace {
        &self.space
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.space.hilbert_dim()
    }

    pub fn density_matrix(&self) -> DMatrix<C64> {
        self.space.to_matrix(&self.values)
    }

    pub fn trace(&self) -> C64 {
        self.space.elements().iter().zip(&self.values).filter(|((i, j), _)| i == j).map(|(_, v)| *v).sum()
    }

    /// Tr(Oρ).
    pub fn expectation(&self, op: &Operator) -> C64 {
        self.space.elements().iter().zip(&self.values).map(|(&(i, j), v)| op.get(j, i) * v).sum()
    }

    /// Partial trace over a trailing cavity factor of dimension `cutoff`.
    pub fn reduced_qubits_raw(&self, cutoff: usize) -> Result<DMatrix<C64>> {
        if self.dim() != 4 * cutoff {
            return Err(Error::DimensionMismatch(format!("dimension {} is not 4 x {cutoff}", self.dim())));
        }
        let mut m = DMatrix::zeros(4, 4);
        for (&(i, j), v) in self.space.elements().iter().zip(&self.values) {
            if i % cutoff == j % cutoff {
                m[(i / cutoff, j / cutoff)] += *v;
            }
        }
        Ok(m)
    }

    /// Cavity photon-number distribution for the qubit⊗cavity layout.
    pub fn fock_distribution(&self, cutoff: usize) -> Vec<f64> {
        let mut p = vec![0.0; cutoff];
        for (&(i, j), v) in self.space.elements().iter().zip(&self.values) {
            if i == j {
                p[i % cutoff] += v.re;
            }
        }
        p
    }

    fn symmetrize_and_normalize(&mut self) {
        let old = self.values.clone();
        for (k, &(i, j)) in self.space.elements().iter().enumerate() {
            let partner = self.space.position(j, i).map(|m| old[m].conj()).unwrap_or(C64::new(0.0, 0.0));
            self.values[k] = (old[k] + partner) * 0.5;
        }
        let tr = self.trace();
        self.values.iter_mut().for_each(|v| *v /= tr);
    }
}

/// Stationary state of a generator together with the reduced two-qubit state.
#[derive(Clone, Debug)]
pub struct SteadyStateResult {
    pub state: SubspaceState,
    /// Reduced qubit state, present for qubit and qubit⊗cavity layouts.
    pub qubits: Option<QubitState>,
    pub concurrence: Option<f64>,
    pub diagnostics: Diagnostics,
}

impl SteadyStateResult {
    pub fn density_matrix(&self) -> DMatrix<C64> {
        self.state.density_matrix()
    }

    /// Reduced qubit state; errors for generators without qubits.
    pub fn qubit_state(&self) -> Result<&QubitState> {
        self.qubits.as_ref().ok_or_else(|| Error::DimensionMismatch("generator has no qubit factor".into()))
    }
}

fn trace_defect(a: &SparseMatrix, space: &LiouvilleSubspace) -> f64 {
    let mut col_trace = vec![C64::new(0.0, 0.0); a.ncols()];
    for (r, c, v) in a.triplets() {
        let (i, j) = space.elements()[r];
        if i == j {
            col_trace[c] += v;
        }
    }
    col_trace.iter().fold(0.0, |m, z| m.max(z.norm()))
}

struct Ordered {
    pos: Vec<usize>,
    perm: Vec<usize>,
}

fn order(a: &SparseMatrix) -> Ordered {
    let n = a.nrows();
    let mut adj = vec![Vec::new(); n];
    for (r, c, _) in a.triplets() {
        if r != c {
            adj[r].push(c);
            adj[c].push(r);
        }
    }
    for l in adj.iter_mut() {
        l.sort_unstable();
        l.dedup();
    }
    let perm = reverse_cuthill_mckee(&adj);
    let mut pos = vec![0; n];
    for (new, &old) in perm.iter().enumerate() {
        pos[old] = new;
    }
    Ordered { pos, perm }
}

/// Solves 𝓛ρ = 0, Tr ρ = 1 on the closure of the populations.
///
/// One redundant population equation is replaced by the trace condition and the
/// remaining system is eliminated with a bordered band LU in reverse
/// Cuthill–McKee order.
pub fn steady_state(l: &Superoperator) -> Result<SteadyStateResult> {
    let space = l.population_closure();
    let (a, _) = l.restrict(&space);
    let n = space.len();
    let norm = a.max_abs();
    let defect = trace_defect(&a, &space);
    if defect > TRACE_PRESERVATION_TOL * norm.max(1.0) {
        return Err(Error::NotTracePreserving(defect));
    }
    let ord = order(&a);

    // Permuted coordinates of the population (diagonal) elements.
    let mut candidates: Vec<usize> = (0..n).filter(|&k| space.elements()[k].0 == space.elements()[k].1).collect();
    candidates.sort_by(|&x, &y| a.get(x, x).norm().partial_cmp(&a.get(y, y).norm()).unwrap().then(x.cmp(&y)));

    let mut failures = Vec::new();
    for &j0 in candidates.iter().take(PIVOT_CANDIDATES) {
        match solve_bordered(&a, &space, &ord, j0) {
            Ok((x, bw)) => {
                let residual = a.matvec(&x).iter().fold(0.0f64, |m, z| m.max(z.norm()));
                if residual > RESIDUAL_TOL * norm.max(f64::MIN_POSITIVE) {
                    failures.push(format!("pivot {j0}: residual {residual:e}"));
                    continue;
                }
                let mut state = SubspaceState::new(space.clone(), x);
                state.symmetrize_and_normalize();
                return finish(l, state, residual, norm, bw);
            }
            Err(msg) => failures.push(msg),
        }
    }
    if failures.iter().all(|f| f.contains("singular")) {
        Err(Error::DegenerateSteadyState(failures.join("; ")))
    } else {
        Err(Error::NonConvergence(failures.join("; ")))
    }
}

fn solve_bordered(
    a: &SparseMatrix,
    space: &LiouvilleSubspace,
    ord: &Ordered,
    j0: usize,
) -> std::result::Result<(Vec<C64>, (usize, usize)), String> {
    let n = a.nrows();
    let p0 = ord.pos[j0];
    let shrink = |p: usize| if p > p0 { p - 1 } else { p };
    let m = n - 1;
    let (mut kl, mut ku) = (0usize, 0usize);
    for (r, c, _) in a.triplets() {
        if r == j0 || c == j0 {
            continue;
        }
        let (pr, pc) = (shrink(ord.pos[r]), shrink(ord.pos[c]));
        if pr > pc {
            kl = kl.max(pr - pc);
        } else {
            ku = ku.max(pc - pr);
        }
    }
    let mut band = BandMatrix::new(m.max(1), kl, ku);
    let mut rhs = vec![C64::new(0.0, 0.0); m];
    for (r, c, v) in a.triplets() {
        if r == j0 {
            continue;
        }
        let pr = shrink(ord.pos[r]);
        if c == j0 {
            rhs[pr] = v;
        } else {
            band.add(pr, shrink(ord.pos[c]), v);
        }
    }
    let mut z = rhs;
    if m > 0 {
        let lu = band.factor(PIVOT_TOL).map_err(|k| format!("pivot {j0}: singular at column {k}"))?;
        lu.solve(&mut z);
    }
    // Trace row: t·x' + x_{j0} = 1 with x' = −y z.
    let mut tz = C64::new(0.0, 0.0);
    for new in 0..n {
        let old = ord.perm[new];
        if old == j0 {
            continue;
        }
        let (i, j) = space.elements()[old];
        if i == j {
            tz += z[shrink(new)];
        }
    }
    let denom = C64::new(1.0, 0.0) - tz;
    if denom.norm() < 1e-12 * (1.0 + tz.norm()) {
        return Err(format!("pivot {j0}: singular bordered denominator"));
    }
    let y = C64::new(1.0, 0.0) / denom;
    let mut x = vec![C64::new(0.0, 0.0); n];
    for (new, &old) in ord.perm.iter().enumerate() {
        x[old] = if old == j0 { y } else { -y * z[shrink(new)] };
    }
    Ok((x, (kl, ku)))
}

fn finish(
    l: &Superoperator,
    state: SubspaceState,
    residual: f64,
    norm: f64,
    bandwidth: (usize, usize),
) -> Result<SteadyStateResult> {
    let (cutoff, qubits_raw) = match l.layout() {
        Layout::QubitsCavity { cutoff } => (Some(cutoff), Some(state.reduced_qubits_raw(cutoff)?)),
        Layout::Qubits => (None, Some(state.density_matrix())),
        Layout::Cavity { cutoff } => (Some(cutoff), None),
        Layout::Generic => (None, None),
    };
    let top_fock_population = cutoff.and_then(|c| state.fock_distribution(c).last().copied());
    let qubits = qubits_raw.map(|m| QubitState::from_numerical(&m)).transpose()?;
    let concurrence = qubits.as_ref().map(super::concurrence);
    let subspace_dim = state.space().len();
    Ok(SteadyStateResult {
        state,
        qubits,
        concurrence,
        diagnostics: Diagnostics {
            residual,
            generator_norm: norm,
            subspace_dim,
            bandwidth,
            cutoff,
            top_fock_population,
        },
    })
}
