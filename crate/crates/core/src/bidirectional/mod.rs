//! Qubits in front of a mirror: the cavity sits at the reflecting end z = 0
//! of a bidirectional waveguide and the qubits couple to the standing wave.
//! Positions are given as phases k₀zᵢ in `ModelParams::positions`.

use crate::cfrac::{default_ceiling, default_start, mcf_escalate, Approximation, CfracSolution, PhaseSpaceGenerator};
use crate::operators::{check_exact_range, Layout, ModelParams, Operator, Superoperator, TwoQubitSpace};
use crate::solvers::QubitState;
use crate::{Error, Result, C64};
use serde::Serialize;

/// Waveguide-mediated couplings between the cavity (index 0) and the qubits (1, 2).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BidirectionalCouplings {
    /// Coherent exchange J_{j,l}.
    pub j: [[f64; 3]; 3],
    /// Collective decay Γ_{j,l}.
    pub gamma: [[f64; 3]; 3],
    /// Phases k₀z_j, with k₀z₀ = 0.
    pub phases: [f64; 3],
}

impl BidirectionalCouplings {
    pub fn new(kappa: f64, gamma1: f64, gamma2: f64, k0z1: f64, k0z2: f64) -> Self {
        let rates = [kappa, gamma1, gamma2];
        let phases = [0.0, k0z1, k0z2];
        let mut j = [[0.0; 3]; 3];
        let mut gamma = [[0.0; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                let c = (rates[a] * rates[b]).sqrt();
                let (sum, diff) = (phases[a] + phases[b], (phases[a] - phases[b]).abs());
                j[a][b] = c * (sum.sin() + diff.sin()) / 4.0;
                gamma[a][b] = c * (sum.cos() + diff.cos()) / 2.0;
            }
        }
        BidirectionalCouplings { j, gamma, phases }
    }

    pub fn from_params(p: &ModelParams) -> Result<Self> {
        let [z1, z2] = p.positions.ok_or(Error::MissingPositions)?;
        Ok(Self::new(p.kappa, p.gamma1, p.gamma2, z1, z2))
    }

    /// Flip-flop strength J₁₂ + J₂₁ of H'_dip.
    pub fn j12(&self) -> f64 {
        self.j[1][2] + self.j[2][1]
    }

    /// Δ'ᵢ = Δᵢ + Jᵢᵢ.
    pub fn shifted_detunings(&self, p: &ModelParams) -> [f64; 2] {
        [p.delta1 + self.j[1][1], p.delta2 + self.j[2][2]]
    }

    /// Smallest eigenvalue of Γ (symmetric 3×3).
    pub fn gamma_min_eigenvalue(&self) -> f64 {
        let m = nalgebra::Matrix3::from_fn(|a, b| self.gamma[a][b]);
        m.symmetric_eigenvalues().min()
    }

    /// Smallest eigenvalue of the qubit block of Γ. Zero when a collective qubit
    /// mode is decoupled from the waveguide.
    pub fn qubit_gamma_min_eigenvalue(&self) -> f64 {
        let m = nalgebra::Matrix2::from_fn(|a, b| self.gamma[a + 1][b + 1]);
        m.symmetric_eigenvalues().min()
    }
}

/// Without dephasing, a qubit mode that is decoupled from the waveguide, is a
/// normal mode of the coherent couplings and is not reached by the field is
/// never damped, and the steady state is not unique.
fn check_unique(k: &BidirectionalCouplings, p: &ModelParams) -> Result<()> {
    use nalgebra::{Matrix2, Vector2};
    if p.gamma_phi != 0.0 {
        return Ok(());
    }
    let tol = 1e-9 * p.gamma1.max(p.gamma2);
    let g = Matrix2::from_fn(|a, b| k.gamma[a + 1][b + 1]);
    let [d1, d2] = k.shifted_detunings(p);
    let m = Matrix2::new(d1, k.j[1][2], k.j[2][1], d2);
    let dj = Vector2::new(k.j[0][1], k.j[0][2]);
    let dg = Vector2::new(k.gamma[0][1], k.gamma[0][2]);
    // Any undamped mode is a null vector of Γ, an eigenvector of the coherent
    // block or orthogonal to a drive vector.
    let mut candidates: Vec<Vector2<f64>> = Vec::new();
    candidates.extend(g.symmetric_eigen().eigenvectors.column_iter().map(|c| c.into_owned()));
    candidates.extend(m.symmetric_eigen().eigenvectors.column_iter().map(|c| c.into_owned()));
    for d in [dj, dg] {
        if d.norm() > 0.0 {
            candidates.push(Vector2::new(-d[1], d[0]) / d.norm());
        }
    }
    let undamped = |v: &Vector2<f64>| {
        let mv = m * v;
        let driven = p.n_th > 0.0 && dj.dot(v).abs() + dg.dot(v).abs() > tol;
        (g * v).norm() <= tol && (mv - v * v.dot(&mv)).norm() <= tol && !driven
    };
    if candidates.iter().any(undamped) {
        return Err(Error::DegenerateSteadyState(format!(
            "collective qubit mode decoupled at k0z = ({}, {})",
            k.phases[1], k.phases[2]
        )));
    }
    Ok(())
}

fn check_lossless(p: &ModelParams) -> Result<()> {
    if p.p_loss != 0.0 {
        return Err(Error::InvalidParameter { name: "p_loss", value: p.p_loss });
    }
    Ok(())
}

/// −i[H₁ + H₂ + Σ J_{jl}c_j†c_l, ·] + Σ Γ_{jl}𝒟[c_j, c_l] over `ops` = [c₀, c₁, c₂],
/// restricted to indices from `first` on.
fn coupling_terms(
    ops: &[Operator; 3],
    k: &BidirectionalCouplings,
    sz: [&Operator; 2],
    p: &ModelParams,
    layout: Layout,
    first: usize,
) -> Superoperator {
    let dim = ops[1].dim();
    let mut h = sz[0].scale_re(p.delta1 / 2.0).add(&sz[1].scale_re(p.delta2 / 2.0));
    let mut l = Superoperator::zero(dim, layout);
    for a in first..3 {
        for b in first..3 {
            if k.j[a][b] != 0.0 {
                h = h.add(&ops[a].dagger().mul(&ops[b]).scale_re(k.j[a][b]));
            }
            if k.gamma[a][b] != 0.0 {
                l.add_assign(Superoperator::cross_dissipator(&ops[a], &ops[b], k.gamma[a][b], layout));
            }
        }
    }
    l.add_assign(Superoperator::hamiltonian(&h, layout));
    for z in sz {
        l.add_assign(Superoperator::dissipator(z, p.gamma_phi / 2.0, layout));
    }
    l
}

/// Exact generator on qubit₁ ⊗ qubit₂ ⊗ cavity for the mirror-terminated waveguide.
pub fn build_bidirectional_liouvillian(p: &ModelParams) -> Result<Superoperator> {
    check_lossless(p)?;
    let k = BidirectionalCouplings::from_params(p)?;
    check_unique(&k, p)?;
    let cutoff = check_exact_range(p, crate::operators::DEFAULT_TAIL_TOLERANCE)?;
    let s = TwoQubitSpace::new(cutoff);
    let layout = Layout::QubitsCavity { cutoff };
    let a = s.a();
    let ops = [a.clone(), s.sigma_minus(1), s.sigma_minus(2)];
    let (z1, z2) = (s.sigma_z(1), s.sigma_z(2));
    Ok(coupling_terms(&ops, &k, [&z1, &z2], p, layout, 0)
        .plus(Superoperator::dissipator(&a, p.kappa * (p.n_th + 1.0), layout))
        .plus(Superoperator::dissipator(&a.dagger(), p.kappa * p.n_th, layout)))
}

/// Adiabatic dark state (iδ_a|00⟩ + √(2κγ)α₀|S⟩)/norm for a static field.
pub fn bidirectional_dark_state(alpha0: C64, delta_a: f64, p: &ModelParams) -> Result<QubitState> {
    let g = p.symmetric_gamma()?;
    let s = crate::operators::singlet();
    let d = C64::new(0.0, delta_a);
    let a = alpha0 * (2.0 * p.kappa * g).sqrt();
    if d.norm() == 0.0 && a.norm() == 0.0 {
        return Err(Error::ZeroNorm);
    }
    QubitState::pure(&[d + a * s[0], a * s[1], a * s[2], a * s[3]])
}

/// Phase-space generator with the cavity replaced by the classical field and
/// the qubit backaction on the cavity dropped.
pub fn bidirectional_generator(p: &ModelParams) -> Result<PhaseSpaceGenerator> {
    p.validate()?;
    check_lossless(p)?;
    let k = BidirectionalCouplings::from_params(p)?;
    check_unique(&k, p)?;
    let s = TwoQubitSpace::qubits_only();
    let layout = Layout::Qubits;
    let sm = [s.sigma_minus(1), s.sigma_minus(2)];
    let ops = [s.identity(), sm[0].clone(), sm[1].clone()];
    let (z1, z2) = (s.sigma_z(1), s.sigma_z(2));
    let lq = coupling_terms(&ops, &k, [&z1, &z2], p, layout, 1);
    let mut lp = Superoperator::zero(4, layout);
    let mut lm = Superoperator::zero(4, layout);
    for (i, x) in sm.iter().enumerate() {
        let (j0, g0) = (k.j[0][i + 1], k.gamma[0][i + 1]);
        let cp = C64::new(-g0 / 2.0, -j0);
        let cm = C64::new(g0 / 2.0, -j0);
        let xd = x.dagger();
        lp.push_sandwich(cp, Some(&xd), None);
        lp.push_sandwich(-cp, None, Some(&xd));
        lm.push_sandwich(cm, Some(x), None);
        lm.push_sandwich(-cm, None, Some(x));
    }
    PhaseSpaceGenerator::new(lq, lp, lm, p.kappa, p.n_th, Approximation::BackactionNeglected)
}

/// Steady state of the backaction-neglected phase-space model by matrix
/// continued fractions.
pub fn bidirectional_phase_space_steady(p: &ModelParams) -> Result<CfracSolution> {
    let g = bidirectional_generator(p)?;
    mcf_escalate(&g, default_start(p.n_th), default_ceiling(p.n_th))
}
