use crate::operators::{drive_superoperators, qubit_liouvillian, Layout, ModelParams, Superoperator, TwoQubitSpace};
use crate::solvers::{steady_state, QubitState};
use crate::{Error, Result, C64};

/// Mean field radius √(n_th/2).
pub fn mean_radius(p: &ModelParams) -> f64 {
    (p.n_th / 2.0).sqrt()
}

/// Rate κn_th/(8r₀²) multiplying 𝒟[S^z] once the phase diffuses at fixed radius r₀.
pub fn phase_diffusion_rate(p: &ModelParams, r0: f64) -> Result<f64> {
    if !(r0 > 0.0) || !r0.is_finite() {
        return Err(Error::InvalidParameter { name: "r0", value: r0 });
    }
    Ok(p.kappa * p.n_th / (8.0 * r0 * r0))
}

/// 𝓛_q + r₀(𝓛₊ + 𝓛₋) + (κn_th/8r₀²)𝒟[S^z] with S^z = σ₁ᶻ + σ₂ᶻ, in the frame
/// co-rotating with the field phase.
pub fn phase_diffusion_liouvillian(p: &ModelParams, r0: f64) -> Result<Superoperator> {
    p.validate()?;
    let rate = phase_diffusion_rate(p, r0)?;
    let s = TwoQubitSpace::qubits_only();
    let sz = s.sigma_z(1).add(&s.sigma_z(2));
    let (lp, lm) = drive_superoperators(p);
    Ok(qubit_liouvillian(p)
        .plus(lp.scaled(C64::from(r0)))
        .plus(lm.scaled(C64::from(r0)))
        .plus(Superoperator::dissipator(&sz, rate, Layout::Qubits)))
}

/// Steady state of the phase-diffusion model at fixed radius `r0`.
pub fn phase_diffusion_steady(p: &ModelParams, r0: f64) -> Result<QubitState> {
    let l = phase_diffusion_liouvillian(p, r0)?;
    let r = steady_state(&l)?;
    r.qubits.ok_or_else(|| Error::DimensionMismatch("phase-diffusion generator lost its qubit layout".into()))
}
