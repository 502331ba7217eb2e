use super::{Approximation, PhaseSpaceGenerator};
use crate::operators::ModelParams;
use crate::solvers::QubitState;
use crate::{Error, Result, C64};
use nalgebra::{DMatrix, DVector};

/// Population shift under n_max → n_max + 8 accepted as converged.
pub const CONVERGENCE_TOL: f64 = 1e-8;
const ESCALATION_PROBE: usize = 8;

/// Steady state from the mode expansion.
#[derive(Clone, Debug)]
pub struct CfracSolution {
    /// Reduced state μ^{0,0}.
    pub qubits: QubitState,
    pub n_max: usize,
    pub converged: bool,
    /// (ρ₀₀, ρ_T, ρ_S, ρ₁₁).
    pub populations: [f64; 4],
    pub concurrence: f64,
    /// Largest population change in the last escalation probe.
    pub population_shift: f64,
    pub approximation: Approximation,
}

impl CfracSolution {
    fn from_sigma0(sigma0: &[C64], n_max: usize, approximation: Approximation) -> Result<Self> {
        let m = DMatrix::from_column_slice(4, 4, &sigma0[..16]);
        let qubits = QubitState::from_numerical(&m)?;
        Ok(CfracSolution {
            populations: qubits.ts_populations(),
            concurrence: qubits.concurrence(),
            qubits,
            n_max,
            converged: false,
            population_shift: f64::NAN,
            approximation,
        })
    }
}

/// Mode blocks σⁿ = (μ^{n,0}, μ^{n,1}, μ^{n,−1}) of a truncated solve.
#[derive(Clone, Debug)]
pub struct ModeCoefficients {
    pub n_max: usize,
    /// One 48-vector per level n = 0..=n_max, three column-stacked 4×4 blocks.
    pub blocks: Vec<DVector<C64>>,
}

impl ModeCoefficients {
    /// The 4×4 block `m` ∈ {0, 1, −1} of level `n`.
    pub fn block(&self, n: usize, m: i32) -> DMatrix<C64> {
        let off = match m {
            0 => 0,
            1 => 16,
            -1 => 32,
            _ => panic!("stored blocks have m in {{-1, 0, 1}}"),
        };
        DMatrix::from_column_slice(4, 4, &self.blocks[n].as_slice()[off..off + 16])
    }

    pub fn level_norm(&self, n: usize) -> f64 {
        self.blocks[n].iter().fold(0.0, |a, z| a.max(z.norm()))
    }
}

/// Recurrence blocks of the steady-state hierarchy with the m = ±2 modes eliminated.
struct Blocks<'a> {
    g: &'a PhaseSpaceGenerator,
    s: f64,
    id: DMatrix<C64>,
}

impl<'a> Blocks<'a> {
    fn new(g: &'a PhaseSpaceGenerator) -> Self {
        Blocks { g, s: g.field_variance(), id: DMatrix::identity(16, 16) }
    }

    fn resolvent(&self, rate: f64, level: usize) -> Result<DMatrix<C64>> {
        let m = &self.id * C64::new(rate, 0.0) - self.g.lq_dense();
        m.lu().try_inverse().ok_or(Error::SingularBlock { level })
    }

    /// 𝒫ˣ±(n) = s 𝓛± (κ(2n+x) − 𝓛_q)⁻¹ 𝓛∓; zero when 2n + x = 0.
    fn p(&self, x: usize, n: usize) -> Result<(DMatrix<C64>, DMatrix<C64>)> {
        let order = 2 * n + x;
        if order == 0 {
            return Ok((DMatrix::zeros(16, 16), DMatrix::zeros(16, 16)));
        }
        let g = self.resolvent(self.g.kappa * order as f64, n)?;
        let (lp, lm) = (self.g.lp_dense(), self.g.lm_dense());
        let s = C64::new(self.s, 0.0);
        Ok((lp * &g * lm * s, lm * &g * lp * s))
    }

    fn abc(&self, n: usize, with_m2: bool) -> Result<(DMatrix<C64>, DMatrix<C64>, DMatrix<C64>)> {
        let k = self.g.kappa;
        let nf = n as f64;
        let s = self.s;
        let (lq, lp, lm) = (self.g.lq_dense(), self.g.lp_dense(), self.g.lm_dense());
        let (p0p, p0m) = self.p(0, n)?;
        let (p2p, p2m) = if with_m2 { self.p(2, n)? } else { (DMatrix::zeros(16, 16), DMatrix::zeros(16, 16)) };
        let re = |x: f64| C64::new(x, 0.0);
        let base = &self.id * re(k * (2.0 * nf + 1.0)) - lq;
        let ap = &base - &p2p * re(nf + 2.0) - &p0p * re(nf);
        let am = &base - &p2m * re(nf + 2.0) - &p0m * re(nf);
        let c = (s * (nf + 1.0)).sqrt();

        let mut a = DMatrix::<C64>::zeros(48, 48);
        a.view_mut((0, 0), (16, 16)).copy_from(&(lq - &self.id * re(2.0 * nf * k)));
        a.view_mut((0, 16), (16, 16)).copy_from(&(lp * re(c)));
        a.view_mut((0, 32), (16, 16)).copy_from(&(lm * re(c)));
        a.view_mut((16, 0), (16, 16)).copy_from(&(lm * re(c)));
        a.view_mut((16, 16), (16, 16)).copy_from(&(-ap));
        a.view_mut((32, 0), (16, 16)).copy_from(&(lp * re(c)));
        a.view_mut((32, 32), (16, 16)).copy_from(&(-am));
        let a = -a;

        let rs = s.sqrt();
        let mut b = DMatrix::<C64>::zeros(48, 48);
        b.view_mut((0, 16), (16, 16)).copy_from(&(lp * re(rs)));
        b.view_mut((0, 32), (16, 16)).copy_from(&(lm * re(rs)));
        b.view_mut((16, 16), (16, 16)).copy_from(&(&p0p * re((nf + 1.0).sqrt())));
        b.view_mut((32, 32), (16, 16)).copy_from(&(&p0m * re((nf + 1.0).sqrt())));
        let b = b * re(nf.sqrt());

        let mut cm = DMatrix::<C64>::zeros(48, 48);
        cm.view_mut((16, 0), (16, 16)).copy_from(&(lm * re(rs)));
        cm.view_mut((16, 16), (16, 16)).copy_from(&(&p2p * re((nf + 2.0).sqrt())));
        cm.view_mut((32, 0), (16, 16)).copy_from(&(lp * re(rs)));
        cm.view_mut((32, 32), (16, 16)).copy_from(&(&p2m * re((nf + 2.0).sqrt())));
        let cm = cm * re((nf + 1.0).sqrt());
        Ok((a, b, cm))
    }
}

/// Solves (A₀ + C₀T₁)σ⁰ = 0 with Tr μ^{0,0} = 1.
fn solve_level_zero(mut m: DMatrix<C64>) -> Result<DVector<C64>> {
    for j in 0..48 {
        m[(0, j)] = C64::new(0.0, 0.0);
    }
    for d in [0, 5, 10, 15] {
        m[(0, d)] = C64::new(1.0, 0.0);
    }
    let mut rhs = DVector::zeros(48);
    rhs[0] = C64::new(1.0, 0.0);
    m.lu().solve(&rhs).ok_or(Error::SingularBlock { level: 0 })
}

fn backward(g: &PhaseSpaceGenerator, n_max: usize, keep: bool) -> Result<(DVector<C64>, Vec<DMatrix<C64>>)> {
    let blocks = Blocks::new(g);
    let mut t = DMatrix::<C64>::zeros(48, 48);
    let mut stored = Vec::new();
    for n in (1..=n_max).rev() {
        let (a, b, c) = blocks.abc(n, true)?;
        let lhs = a + c * &t;
        t = -lhs.lu().solve(&b).ok_or(Error::SingularBlock { level: n })?;
        if keep {
            stored.push(t.clone());
        }
    }
    let (a0, _, c0) = blocks.abc(0, true)?;
    let sigma0 = solve_level_zero(a0 + c0 * &t)?;
    stored.reverse();
    Ok((sigma0, stored))
}

/// Single matrix continued-fraction solve at a fixed truncation.
pub fn mcf_fixed(g: &PhaseSpaceGenerator, n_max: usize) -> Result<CfracSolution> {
    let (sigma0, _) = backward(g, n_max, false)?;
    CfracSolution::from_sigma0(sigma0.as_slice(), n_max, g.approximation)
}

/// Mode coefficients σⁿ for n = 0..=n_max.
pub fn mcf_modes(g: &PhaseSpaceGenerator, n_max: usize) -> Result<ModeCoefficients> {
    let (sigma0, ts) = backward(g, n_max, true)?;
    let mut blocks = vec![sigma0];
    for t in &ts {
        let next = t * blocks.last().unwrap();
        blocks.push(next);
    }
    Ok(ModeCoefficients { n_max, blocks })
}

/// Default starting truncation ⌈√n_th⌉ + 8.
pub fn default_start(n_th: f64) -> usize {
    n_th.max(0.0).sqrt().ceil() as usize + ESCALATION_PROBE
}

/// Default truncation ceiling for the escalation.
pub fn default_ceiling(n_th: f64) -> usize {
    (12.0 * n_th.max(0.0).sqrt()) as usize + 400
}

/// Escalates n_max by ×1.5 until populations move less than [`CONVERGENCE_TOL`]
/// under n_max → n_max + 8.
pub fn mcf_escalate(g: &PhaseSpaceGenerator, start: usize, ceiling: usize) -> Result<CfracSolution> {
    let mut n = start.max(4);
    loop {
        let a = mcf_fixed(g, n)?;
        let b = mcf_fixed(g, n + ESCALATION_PROBE)?;
        let shift = a.populations.iter().zip(&b.populations).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        if shift < CONVERGENCE_TOL {
            return Ok(CfracSolution { converged: true, population_shift: shift, ..a });
        }
        if n >= ceiling {
            return Err(Error::NonConvergence(format!(
                "continued fraction not converged at n_max = {n} (population shift {shift:e})"
            )));
        }
        n = ((n as f64 * 1.5).ceil() as usize).min(ceiling);
    }
}

/// Converged matrix continued-fraction steady state of the cascaded network.
/// `n_max` overrides the starting truncation.
pub fn mcf_steady(p: &ModelParams, n_max: Option<usize>) -> Result<CfracSolution> {
    if !(p.kappa > 0.0) || !(p.gamma1 > 0.0 || p.gamma2 > 0.0) {
        return Err(Error::InvalidParameter { name: "kappa", value: p.kappa });
    }
    let g = PhaseSpaceGenerator::from_params(p)?;
    let start = n_max.unwrap_or_else(|| default_start(p.n_th));
    mcf_escalate(&g, start, default_ceiling(p.n_th).max(start * 4))
}

/// Level-zero solve with the continued fraction set to zero, A₀σ⁰ = 0.
pub fn mcf_depth_zero(g: &PhaseSpaceGenerator) -> Result<CfracSolution> {
    let blocks = Blocks::new(g);
    let (a0, _, _) = blocks.abc(0, true)?;
    CfracSolution::from_sigma0(solve_level_zero(a0)?.as_slice(), 0, g.approximation)
}

/// Level-zero solve keeping only the |m| ≤ 1 modes. This is the decorrelation
/// (Bourret) steady state.
pub fn mcf_lowest_order(g: &PhaseSpaceGenerator) -> Result<CfracSolution> {
    let blocks = Blocks::new(g);
    let (a0, _, _) = blocks.abc(0, false)?;
    CfracSolution::from_sigma0(solve_level_zero(a0)?.as_slice(), 0, g.approximation)
}
