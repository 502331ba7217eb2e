use crate::analytic::upsilon;
use crate::operators::ModelParams;
use crate::{Error, Result};

/// Value of X₀ = 𝓕₁(Y₀ + 𝓕₂Y₁) and its two continued fractions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalarCf {
    pub value: f64,
    pub f1: f64,
    pub f2: f64,
    pub depth: usize,
}

/// Solves aₙXₙ = bₙXₙ₋₁ + cₙXₙ₊₁ + Y₀δₙ₀ + Y₁δₙ₁ for X₀ by backward
/// recursion of Dₙ = aₙ − cₙbₙ₊₁/Dₙ₊₁ from `depth`.
pub fn scalar_cf_eval<A, B, C>(a: A, b: B, c: C, y0: f64, y1: f64, depth: usize) -> Result<ScalarCf>
where
    A: Fn(usize) -> f64,
    B: Fn(usize) -> f64,
    C: Fn(usize) -> f64,
{
    if depth < 1 {
        return Err(Error::InvalidParameter { name: "depth", value: depth as f64 });
    }
    let small = |d: f64, n: usize| -> Result<f64> {
        if d.abs() < 1e-300 || !d.is_finite() {
            Err(Error::NearZeroDenominator { depth: n })
        } else {
            Ok(d)
        }
    };
    let mut d = small(a(depth), depth)?;
    for n in (1..depth).rev() {
        d = small(a(n) - c(n) * b(n + 1) / d, n)?;
    }
    let f2 = c(0) / d;
    let f1 = 1.0 / small(a(0) - c(0) * b(1) / d, 0)?;
    Ok(ScalarCf { value: f1 * (y0 + f2 * y1), f1, f2, depth })
}

/// Doubles the depth from `start` until X₀, 𝓕₁ and 𝓕₂ are stable to 1e-12 (relative).
pub fn scalar_cf_converged<A, B, C>(a: A, b: B, c: C, y0: f64, y1: f64, start: usize) -> Result<ScalarCf>
where
    A: Fn(usize) -> f64 + Copy,
    B: Fn(usize) -> f64 + Copy,
    C: Fn(usize) -> f64 + Copy,
{
    let mut depth = start.max(1);
    let mut prev = scalar_cf_eval(a, b, c, y0, y1, depth)?;
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1e-300);
    for _ in 0..24 {
        depth *= 2;
        let next = scalar_cf_eval(a, b, c, y0, y1, depth)?;
        if close(next.value, prev.value) && close(next.f1, prev.f1) && close(next.f2, prev.f2) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergence(format!("scalar continued fraction unstable at depth {depth}")))
}

fn rates(p: &ModelParams) -> Result<(f64, f64, f64)> {
    p.validate()?;
    let g = p.symmetric_gamma()?;
    if !(g > 0.0) || !(p.kappa > 0.0) {
        return Err(Error::InvalidParameter { name: "kappa", value: p.kappa });
    }
    Ok((g, p.kappa, p.phi()))
}

/// Singlet and triplet populations of the three-level reduction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThreeLevelSolution {
    pub rho_s: f64,
    pub rho_t: f64,
    pub concurrence: f64,
    pub depth: usize,
}

/// Solves the decoupled singlet and triplet recurrences of the three-level,
/// lowest-order-in-κ reduction. `depth` is the starting depth of the doubling test.
pub fn three_level_cf_steady(p: &ModelParams, depth: usize) -> Result<ThreeLevelSolution> {
    let (g, k, phi) = rates(p)?;
    if phi == 0.0 {
        return Ok(ThreeLevelSolution { rho_s: 0.0, rho_t: 0.0, concurrence: 0.0, depth: 0 });
    }
    let x = 8.0 * phi * g;
    let gp = g * g + 24.0 * k * phi;
    let a = move |n: usize| gp + x * (2 * n + 1) as f64;
    let b = move |n: usize| x * n as f64;
    let c = move |n: usize| x * (n + 1) as f64;
    let ys = (8.0 * phi * (g + k), -8.0 * phi * (g + 3.0 * k + 48.0 * phi * k * k / (g * g)));
    let yt = (8.0 * phi * k, 3.0 * (8.0 * phi * k).powi(2) / (g * g));
    let s = scalar_cf_converged(a, b, c, ys.0, ys.1, depth)?;
    let t = scalar_cf_converged(a, b, c, yt.0, yt.1, depth)?;
    Ok(ThreeLevelSolution {
        rho_s: s.value,
        rho_t: t.value,
        concurrence: (s.value - t.value).max(0.0),
        depth: s.depth.max(t.depth),
    })
}

/// Renormalized flux Φ_eff = Φγ²/(γ² + 24κΦ).
pub fn effective_flux(gamma: f64, kappa: f64, phi: f64) -> f64 {
    phi * gamma * gamma / (gamma * gamma + 24.0 * kappa * phi)
}

/// Closed-form singlet and triplet populations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedFormPopulations {
    /// Lowest order in κ/γ: (ρ_S, ρ_T).
    pub lowest: (f64, f64),
    /// With the (1 + 3κ/γ) corrections: (ρ_S, ρ_T).
    pub corrected: (f64, f64),
}

fn upsilon0(x: f64) -> Result<f64> {
    if x == 0.0 {
        Ok(1.0)
    } else {
        upsilon(x)
    }
}

pub fn closed_form_populations(p: &ModelParams) -> Result<ClosedFormPopulations> {
    let (g, k, phi) = rates(p)?;
    let u = upsilon0(effective_flux(g, k, phi) / g)?;
    let r = k / g;
    let w = 8.0 * k * phi / (g * g);
    let uc = u * (1.0 + 3.0 * r) - 3.0 * r;
    let lowest = (1.0 - u * (1.0 + 2.0 * w), w * u);
    let corrected = (1.0 - uc * (1.0 + 2.0 * w), w * uc);
    let fix = |(s, t): (f64, f64)| if phi == 0.0 { (0.0, 0.0) } else { (s, t) };
    Ok(ClosedFormPopulations { lowest: fix(lowest), corrected: fix(corrected) })
}

/// C = 1 − Υ(Φ_eff/γ)(1 + 24κΦ/γ²), clipped at zero.
pub fn closed_form_concurrence(p: &ModelParams) -> Result<f64> {
    let (g, k, phi) = rates(p)?;
    if phi == 0.0 {
        return Ok(0.0);
    }
    let u = upsilon(effective_flux(g, k, phi) / g)?;
    Ok((1.0 - u * (1.0 + 24.0 * k * phi / (g * g))).max(0.0))
}

/// Optimal thermal occupation, analytic and by maximizing the closed form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimalOccupation {
    /// γ²/(12κ²).
    pub n_star: f64,
    /// 1 − 2Υ(γ/(48κ)).
    pub c_star: f64,
    pub n_star_numerical: f64,
    pub c_star_numerical: f64,
}

/// Golden-section search for the maximum of `f` over [lo, hi].
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

pub fn optimal_occupation(p: &ModelParams) -> Result<OptimalOccupation> {
    let (g, k, _) = rates(p)?;
    let n_star = g * g / (12.0 * k * k);
    let c_star = 1.0 - 2.0 * upsilon(g / (48.0 * k))?;
    let eval = |log_n: f64| {
        let q = ModelParams { n_th: 10f64.powf(log_n), ..p.clone() };
        closed_form_concurrence(&q).unwrap_or(0.0)
    };
    let centre = n_star.log10();
    let (x, c) = golden_section_max(eval, centre - 3.0, centre + 3.0, 1e-6);
    Ok(OptimalOccupation { n_star, c_star, n_star_numerical: 10f64.powf(x), c_star_numerical: c })
}
