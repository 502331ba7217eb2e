use super::basis::{annihilation, TwoQubitSpace};
use super::params::{DEFAULT_TAIL_TOLERANCE, EXACT_NTH_LIMIT};
use super::{Layout, ModelParams, Operator, Superoperator};
use crate::{Error, Result, C64};

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Thermal source feeding the filter cavity: κ(n+1)𝒟[a] + κn𝒟[a†] + κ𝒟[a].
fn cavity_terms(a: &Operator, p: &ModelParams, layout: Layout) -> Superoperator {
    let k = p.kappa;
    let n = p.n_th;
    Superoperator::dissipator(a, k * (n + 1.0), layout)
        .plus(Superoperator::dissipator(&a.dagger(), k * n, layout))
        .plus(Superoperator::dissipator(a, k, layout))
}

/// −i[(Δ₁σ₁ᶻ + Δ₂σ₂ᶻ)/2, ·].
fn detuning_terms(s: &TwoQubitSpace, p: &ModelParams, layout: Layout) -> Superoperator {
    let h = s.sigma_z(1).scale_re(p.delta1 / 2.0).add(&s.sigma_z(2).scale_re(p.delta2 / 2.0));
    Superoperator::hamiltonian(&h, layout)
}

fn dephasing_terms(s: &TwoQubitSpace, p: &ModelParams, layout: Layout) -> Superoperator {
    Superoperator::dissipator(&s.sigma_z(1), p.gamma_phi / 2.0, layout).plus(Superoperator::dissipator(
        &s.sigma_z(2),
        p.gamma_phi / 2.0,
        layout,
    ))
}

/// rate·([xρ, y†] + [y, ρx†]) for a source x cascaded into y.
fn cascade(x: &Operator, y: &Operator, rate: f64, dim: usize, layout: Layout) -> Superoperator {
    let mut l = Superoperator::zero(dim, layout);
    let yd = y.dagger();
    let xd = x.dagger();
    l.push_sandwich(c(rate), Some(x), Some(&yd));
    l.push_sandwich(c(-rate), Some(&yd.mul(x)), None);
    l.push_sandwich(c(rate), Some(y), Some(&xd));
    l.push_sandwich(c(-rate), None, Some(&xd.mul(y)));
    l
}

/// Bare qubit dynamics and the qubit-to-qubit cascade with coupling `casc`.
fn qubit_terms(s: &TwoQubitSpace, p: &ModelParams, casc: f64, layout: Layout) -> Superoperator {
    let d = s.dim();
    let (s1, s2) = (s.sigma_minus(1), s.sigma_minus(2));
    detuning_terms(s, p, layout)
        .plus(Superoperator::dissipator(&s1, p.gamma1, layout))
        .plus(Superoperator::dissipator(&s2, p.gamma2, layout))
        .plus(cascade(&s1, &s2, casc, d, layout))
}

pub(crate) fn check_exact_range(p: &ModelParams, tail_tol: f64) -> Result<usize> {
    p.validate()?;
    if p.n_th > EXACT_NTH_LIMIT {
        return Err(Error::ExactRangeExceeded { n_th: p.n_th, limit: EXACT_NTH_LIMIT });
    }
    let cutoff = p.cutoff();
    let tail = p.thermal_tail(cutoff);
    if tail > tail_tol {
        return Err(Error::CutoffTooSmall { cutoff, tail, limit: tail_tol });
    }
    Ok(cutoff)
}

fn ideal_terms(s: &TwoQubitSpace, p: &ModelParams, casc: f64, layout: Layout) -> Superoperator {
    let d = s.dim();
    let a = s.a();
    let mut l = cavity_terms(&a, p, layout).plus(qubit_terms(s, p, casc, layout));
    l.add_assign(cascade(&a, &s.sigma_minus(1), (p.gamma1 * p.kappa).sqrt(), d, layout));
    l.add_assign(cascade(&a, &s.sigma_minus(2), (p.gamma2 * p.kappa).sqrt(), d, layout));
    l
}

/// Cascaded network generator on qubit₁ ⊗ qubit₂ ⊗ cavity, including pure
/// dephasing and the loss-reduced qubit-to-qubit cascade.
pub fn build_full_liouvillian(p: &ModelParams) -> Result<Superoperator> {
    build_full_liouvillian_with_tail(p, DEFAULT_TAIL_TOLERANCE)
}

/// As [`build_full_liouvillian`] with a custom tolerance on the thermal tail above the cutoff.
pub fn build_full_liouvillian_with_tail(p: &ModelParams, tail_tol: f64) -> Result<Superoperator> {
    let cutoff = check_exact_range(p, tail_tol)?;
    let layout = Layout::QubitsCavity { cutoff };
    let s = TwoQubitSpace::new(cutoff);
    let casc = (p.gamma1 * p.gamma2).sqrt() * (1.0 - p.p_loss).sqrt();
    let mut l = ideal_terms(&s, p, casc, layout);
    l.add_assign(dephasing_terms(&s, p, layout));
    Ok(l)
}

/// Generator without dephasing or loss, whatever the parameter values say.
pub fn build_ideal_liouvillian(p: &ModelParams) -> Result<Superoperator> {
    let cutoff = check_exact_range(p, DEFAULT_TAIL_TOLERANCE)?;
    let layout = Layout::QubitsCavity { cutoff };
    let s = TwoQubitSpace::new(cutoff);
    Ok(ideal_terms(&s, p, (p.gamma1 * p.gamma2).sqrt(), layout))
}

/// Cascade Hamiltonian H_casc = i(γ/2)(σ₁⁺σ₂⁻ − σ₁⁻σ₂⁺).
pub fn cascade_hamiltonian(s: &TwoQubitSpace, gamma: f64) -> Operator {
    let a = s.sigma_plus(1).mul(&s.sigma_minus(2));
    let b = s.sigma_minus(1).mul(&s.sigma_plus(2));
    a.sub(&b).scale(C64::new(0.0, gamma / 2.0))
}

/// H_q = H₁ + H₂ + H_casc.
pub fn qubit_hamiltonian(s: &TwoQubitSpace, p: &ModelParams, gamma: f64) -> Operator {
    s.sigma_z(1)
        .scale_re(p.delta1 / 2.0)
        .add(&s.sigma_z(2).scale_re(p.delta2 / 2.0))
        .add(&cascade_hamiltonian(s, gamma))
}

/// Thermal cavity plus 𝓛_q = −i[H_q, ·] + γ𝒟[S⁻] plus the collective drive
/// √(γκ)([aρ, S⁺] + [S⁻, ρa†]).
pub fn build_regrouped_liouvillian(p: &ModelParams) -> Result<Superoperator> {
    let gamma = p.symmetric_gamma()?;
    if p.p_loss != 0.0 {
        return Err(Error::LossNotRegroupable(p.p_loss));
    }
    let cutoff = check_exact_range(p, DEFAULT_TAIL_TOLERANCE)?;
    let layout = Layout::QubitsCavity { cutoff };
    let s = TwoQubitSpace::new(cutoff);
    let a = s.a();
    let sm = s.s_minus();
    let mut l = cavity_terms(&a, p, layout);
    l.add_assign(Superoperator::hamiltonian(&qubit_hamiltonian(&s, p, gamma), layout));
    l.add_assign(Superoperator::dissipator(&sm, gamma, layout));
    l.add_assign(cascade(&a, &sm, (gamma * p.kappa).sqrt(), s.dim(), layout));
    l.add_assign(dephasing_terms(&s, p, layout));
    Ok(l)
}

/// Qubits coupled to a memoryless thermal reservoir:
/// −i[H_q, ·] + γ(n+1)𝒟[S⁻] + γn𝒟[S⁺].
pub fn build_markov_liouvillian(p: &ModelParams) -> Result<Superoperator> {
    p.validate()?;
    let gamma = p.symmetric_gamma()?;
    let layout = Layout::Qubits;
    let s = TwoQubitSpace::qubits_only();
    let sm = s.s_minus();
    let mut l = Superoperator::hamiltonian(&qubit_hamiltonian(&s, p, gamma), layout);
    l.add_assign(Superoperator::dissipator(&sm, gamma * (p.n_th + 1.0), layout));
    l.add_assign(Superoperator::dissipator(&sm.dagger(), gamma * p.n_th, layout));
    l.add_assign(dephasing_terms(&s, p, layout));
    Ok(l)
}

/// Source and filter cavity alone.
pub fn build_thermal_cavity_liouvillian(p: &ModelParams) -> Result<Superoperator> {
    p.validate()?;
    let cutoff = p.cutoff();
    Ok(cavity_terms(&annihilation(cutoff), p, Layout::Cavity { cutoff }))
}

/// Qubit-only part of the network generator, for arbitrary γ₁, γ₂,
/// detunings, dephasing and loss. Equals −i[H_q, ·] + γ𝒟[S⁻] (+ dephasing)
/// in the symmetric lossless case.
pub fn qubit_liouvillian(p: &ModelParams) -> Superoperator {
    let s = TwoQubitSpace::qubits_only();
    let casc = (p.gamma1 * p.gamma2).sqrt() * (1.0 - p.p_loss).sqrt();
    qubit_terms(&s, p, casc, Layout::Qubits).plus(dephasing_terms(&s, p, Layout::Qubits))
}

/// Drive superoperators multiplying α and α* once the cavity field is replaced
/// by a classical amplitude: 𝓛₊μ = Σᵢ√(γᵢκ)[μ, σᵢ⁺], 𝓛₋μ = Σᵢ√(γᵢκ)[σᵢ⁻, μ].
pub fn drive_superoperators(p: &ModelParams) -> (Superoperator, Superoperator) {
    let s = TwoQubitSpace::qubits_only();
    let layout = Layout::Qubits;
    let mut lp = Superoperator::zero(4, layout);
    let mut lm = Superoperator::zero(4, layout);
    for (i, g) in [(1, p.gamma1), (2, p.gamma2)] {
        let r = (g * p.kappa).sqrt();
        let sm = s.sigma_minus(i);
        let sp = sm.dagger();
        lp.push_sandwich(c(r), None, Some(&sp));
        lp.push_sandwich(c(-r), Some(&sp), None);
        lm.push_sandwich(c(r), Some(&sm), None);
        lm.push_sandwich(c(-r), None, Some(&sm));
    }
    (lp, lm)
}
