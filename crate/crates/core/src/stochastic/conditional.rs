use super::ou::{check_grid, OUPath};
use crate::operators::{drive_superoperators, qubit_liouvillian, ModelParams};
use crate::solvers::QubitState;
use crate::{Error, Result, C64};
use nalgebra::{Matrix4, SMatrix, SVector};

pub(crate) type Gen16 = SMatrix<C64, 16, 16>;
pub(crate) type Vec16 = SVector<C64, 16>;

/// Largest stable step relative to the fastest rate, Δt·max(γ, √(κγ)|α|) ≤ 0.05.
pub const STEP_LIMIT: f64 = 0.05;

/// Dense 𝓛_q, 𝓛₊, 𝓛₋ for repeated conditional steps.
#[derive(Clone, Debug)]
pub(crate) struct Propagator {
    lq: Gen16,
    lp: Gen16,
    lm: Gen16,
    gamma_max: f64,
    kappa: f64,
}

impl Propagator {
    pub(crate) fn new(p: &ModelParams) -> Result<Self> {
        p.validate()?;
        if !(p.kappa > 0.0) {
            return Err(Error::InvalidParameter { name: "kappa", value: p.kappa });
        }
        let fixed = |d: nalgebra::DMatrix<C64>| Gen16::from_fn(|i, j| d[(i, j)]);
        let (lp, lm) = drive_superoperators(p);
        Ok(Propagator {
            lq: fixed(qubit_liouvillian(p).to_dense()),
            lp: fixed(lp.to_dense()),
            lm: fixed(lm.to_dense()),
            gamma_max: p.gamma1.max(p.gamma2),
            kappa: p.kappa,
        })
    }

    pub(crate) fn generator(&self, alpha: C64) -> Gen16 {
        self.lq + self.lp * alpha + self.lm * alpha.conj()
    }

    /// Fastest rate for a field bounded by `alpha_max`.
    pub(crate) fn rate(&self, alpha_max: f64) -> f64 {
        self.gamma_max.max((self.kappa * self.gamma_max).sqrt() * alpha_max)
    }

    /// Default step: min(0.02/γ, 0.1/κ), tightened so the stability bound holds
    /// for |α| up to `alpha_bound`.
    pub(crate) fn default_step(&self, alpha_bound: f64) -> f64 {
        let mut dt = 0.1 / self.kappa;
        if self.gamma_max > 0.0 {
            dt = dt.min(0.02 / self.gamma_max);
        }
        let r = self.rate(alpha_bound);
        if r > 0.0 {
            dt = dt.min(0.9 * STEP_LIMIT / r);
        }
        dt
    }

    /// One classical RK4 step with α frozen.
    pub(crate) fn step(&self, y: &Vec16, alpha: C64, h: f64) -> Vec16 {
        let m = self.generator(alpha);
        let k1 = m * y;
        let k2 = m * (y + k1 * C64::from(h / 2.0));
        let k3 = m * (y + k2 * C64::from(h / 2.0));
        let k4 = m * (y + k3 * C64::from(h));
        y + (k1 + (k2 + k3) * C64::from(2.0) + k4) * C64::from(h / 6.0)
    }

    /// Null vector of the conditional generator, normalized to unit trace.
    pub(crate) fn adiabatic(&self, alpha: C64) -> Result<Vec16> {
        let mut m = self.generator(alpha);
        let mut rhs = Vec16::zeros();
        for j in 0..16 {
            m[(0, j)] = if j % 5 == 0 { C64::from(1.0) } else { C64::from(0.0) };
        }
        rhs[0] = C64::from(1.0);
        m.lu()
            .solve(&rhs)
            .ok_or_else(|| Error::DegenerateSteadyState(format!("conditional generator singular at α = {alpha}")))
    }
}

pub(crate) fn to_vec16(m: &Matrix4<C64>) -> Vec16 {
    Vec16::from_fn(|k, _| m[(k % 4, k / 4)])
}

pub(crate) fn to_matrix4(v: &Vec16) -> Matrix4<C64> {
    Matrix4::from_fn(|i, j| v[j * 4 + i])
}

/// Checks Δt ≤ 0.05/max(γ, √(κγ)|α|_max) on every step of `path`.
pub(crate) fn check_steps(prop: &Propagator, path: &OUPath) -> Result<()> {
    let rate = prop.rate(path.max_abs());
    if rate == 0.0 {
        return Ok(());
    }
    let limit = STEP_LIMIT / rate;
    for w in path.times.windows(2) {
        let dt = w[1] - w[0];
        if dt > limit * (1.0 + 1e-12) {
            return Err(Error::StepTooCoarse { dt, rate, limit });
        }
    }
    Ok(())
}

/// Conditional qubit state μ(α(t), t) on the grid of the driving path.
#[derive(Clone, Debug)]
pub struct ConditionalTrajectory {
    pub times: Vec<f64>,
    pub mu: Vec<Matrix4<C64>>,
}

impl ConditionalTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn state(&self, k: usize) -> Result<QubitState> {
        let m = &self.mu[k];
        QubitState::from_numerical(&nalgebra::DMatrix::from_fn(4, 4, |i, j| m[(i, j)]))
    }

    pub fn last_state(&self) -> Result<QubitState> {
        self.state(self.mu.len() - 1)
    }

    /// max |Tr μ − 1| over the trajectory.
    pub fn trace_defect(&self) -> f64 {
        self.mu.iter().map(|m| (m.trace() - C64::from(1.0)).norm()).fold(0.0, f64::max)
    }

    /// max |μ − μ†| over the trajectory.
    pub fn hermiticity_defect(&self) -> f64 {
        self.mu.iter().map(|m| (m - m.adjoint()).camax()).fold(0.0, f64::max)
    }
}

/// Propagates the ground state |00⟩ along `path`.
pub fn propagate_conditional(path: &OUPath, p: &ModelParams) -> Result<ConditionalTrajectory> {
    let ground = QubitState::pure(&crate::operators::ket(0, 0))?;
    propagate_conditional_from(path, p, &ground)
}

/// Integrates μ̇ = (𝓛_q + α𝓛₊ + α*𝓛₋)μ with α(tₖ) held over [tₖ, tₖ₊₁].
pub fn propagate_conditional_from(
    path: &OUPath,
    p: &ModelParams,
    initial: &QubitState,
) -> Result<ConditionalTrajectory> {
    check_grid(&path.times)?;
    if path.alpha.len() != path.times.len() {
        return Err(Error::DimensionMismatch("path amplitudes and times differ in length".into()));
    }
    let prop = Propagator::new(p)?;
    check_steps(&prop, path)?;
    let mut y = to_vec16(initial.matrix());
    let mut mu = Vec::with_capacity(path.len());
    mu.push(to_matrix4(&y));
    for k in 1..path.len() {
        y = prop.step(&y, path.alpha[k - 1], path.times[k] - path.times[k - 1]);
        mu.push(to_matrix4(&y));
    }
    Ok(ConditionalTrajectory { times: path.times.clone(), mu })
}

/// Fine grid refining `t_out` so that no step exceeds `dt`, with the indices
/// of the output points in it.
pub(crate) fn refine(t_out: &[f64], dt: f64) -> (Vec<f64>, Vec<usize>) {
    let mut fine = vec![t_out[0]];
    let mut marks = vec![0];
    for w in t_out.windows(2) {
        let m = ((w[1] - w[0]) / dt).ceil().max(1.0) as usize;
        let h = (w[1] - w[0]) / m as f64;
        for s in 1..m {
            fine.push(w[0] + h * s as f64);
        }
        fine.push(w[1]);
        marks.push(fine.len() - 1);
    }
    (fine, marks)
}

/// Evolution under a constant drive α₀, reported on `t_out`. `dt` defaults to
/// the stability-limited step.
pub fn propagate_constant(
    p: &ModelParams,
    alpha0: C64,
    t_out: &[f64],
    initial: &QubitState,
    dt: Option<f64>,
) -> Result<Vec<QubitState>> {
    check_grid(t_out)?;
    let prop = Propagator::new(p)?;
    let dt = dt.unwrap_or_else(|| prop.default_step(alpha0.norm()));
    let (fine, marks) = refine(t_out, dt);
    let path = OUPath::constant(alpha0, &fine)?;
    let traj = propagate_conditional_from(&path, p, initial)?;
    marks.iter().map(|&k| traj.state(k)).collect()
}

/// Steady state of the conditional generator for a frozen field α.
pub fn conditional_steady_state(p: &ModelParams, alpha: C64) -> Result<QubitState> {
    let prop = Propagator::new(p)?;
    let v = prop.adiabatic(alpha)?;
    let m = to_matrix4(&v);
    QubitState::from_numerical(&nalgebra::DMatrix::from_fn(4, 4, |i, j| m[(i, j)]))
}

/// Pure dark state (√γ|00⟩ + 2√(2κ)α₀|S⟩)/√(γ + 8κ|α₀|²) of a static drive.
pub fn static_dark_state(gamma: f64, kappa: f64, alpha0: C64) -> Result<QubitState> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidParameter { name: "gamma", value: gamma });
    }
    if !(kappa >= 0.0) {
        return Err(Error::InvalidParameter { name: "kappa", value: kappa });
    }
    let s = crate::operators::singlet();
    let a = alpha0 * (2.0 * (2.0 * kappa).sqrt());
    let g = C64::from(gamma.sqrt());
    QubitState::pure(&[g + a * s[0], a * s[1], a * s[2], a * s[3]])
}
