//! Closed-form steady states and helper functions.

mod special;

pub use special::{e1, scaled_e1, upsilon};

use crate::operators::ModelParams;
use crate::solvers::x_form_concurrence;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Reduced Planck constant in J·s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant in J/K (CODATA 2018, exact).
pub const K_B: f64 = 1.380_649e-23;

/// Which approximation produced a prediction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Markov,
    Quasistatic,
    BourretLowest,
    BourretFull,
}

/// Diagonal two-qubit state in the triplet–singlet basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyticPrediction {
    /// (ρ₀₀, ρ_T, ρ_S, ρ₁₁).
    pub populations: [f64; 4],
    pub concurrence: f64,
    pub regime: Regime,
}

impl AnalyticPrediction {
    fn new(populations: [f64; 4], regime: Regime) -> Self {
        let [p00, pt, ps, p11] = populations;
        AnalyticPrediction { populations, concurrence: x_form_concurrence(p00, pt, ps, p11), regime }
    }
}

/// Product of two thermal qubits, the Markov-limit steady state.
pub fn markov_steady(n_th: f64) -> AnalyticPrediction {
    let n = n_th;
    let d = (1.0 + 2.0 * n).powi(2);
    let p = [(n + 1.0).powi(2) / d, n * (n + 1.0) / d, n * (n + 1.0) / d, n * n / d];
    AnalyticPrediction { populations: p, concurrence: 0.0, regime: Regime::Markov }
}

/// Thermal average of the static dark state: Υ|00⟩⟨00| + (1 − Υ)|S⟩⟨S|.
pub fn quasistatic_steady(phi_over_gamma: f64) -> Result<AnalyticPrediction> {
    if !(phi_over_gamma >= 0.0) || !phi_over_gamma.is_finite() {
        return Err(Error::InvalidParameter { name: "phi_over_gamma", value: phi_over_gamma });
    }
    let u = if phi_over_gamma == 0.0 { 1.0 } else { upsilon(phi_over_gamma)? };
    Ok(AnalyticPrediction::new([u, 0.0, 1.0 - u, 0.0], Regime::Quasistatic))
}

/// Both Bourret predictions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BourretPrediction {
    pub full: AnalyticPrediction,
    pub lowest: AnalyticPrediction,
}

fn rates(p: &ModelParams) -> Result<(f64, f64, f64)> {
    p.validate()?;
    let g = p.symmetric_gamma()?;
    if !(g > 0.0) {
        return Err(Error::InvalidParameter { name: "gamma1", value: g });
    }
    Ok((g, p.kappa, p.phi()))
}

/// Full Bourret populations with normalization 𝒩 = (γ+2κ)(γ+2κ+8Φ)[(3γ+2κ)² + 8Φ(γ+2κ)].
pub fn bourret_full(g: f64, k: f64, phi: f64) -> [f64; 4] {
    let n = (g + 2.0 * k) * (g + 2.0 * k + 8.0 * phi) * ((3.0 * g + 2.0 * k).powi(2) + 8.0 * phi * (g + 2.0 * k));
    let r11 = 64.0 * k * phi * phi * (g + k);
    let rt = 8.0 * k * phi * ((3.0 * g + 2.0 * k).powi(2) + 8.0 * phi * (g + k));
    let rs = 8.0 * phi * ((g + k) * (3.0 * g + 2.0 * k).powi(2) + 8.0 * phi * (g * g + k * k + g * k));
    let r00 = 64.0 * k * phi * phi * (g + k)
        + 8.0 * phi * (g + 2.0 * k).powi(3)
        + (g + 2.0 * k).powi(2) * (3.0 * g + 2.0 * k).powi(2);
    [r00 / n, rt / n, rs / n, r11 / n]
}

/// Bourret populations to lowest relevant order in κ/γ.
pub fn bourret_lowest(g: f64, k: f64, phi: f64) -> [f64; 4] {
    let a = g + 8.0 * phi;
    let b = 9.0 * g + 8.0 * phi;
    let r11 = 64.0 * k * phi * phi / (g * a * b);
    let rt = 8.0 * k * phi / (g * a);
    let rs = 8.0 * phi / a - 8.0 * k * phi * (27.0 * g * g + 112.0 * g * phi + 192.0 * phi * phi) / (g * a * a * b);
    let r00 = g / a;
    [r00, rt, rs, r11]
}

/// Steady state of the decorrelated (Bourret) equation, full and lowest-order forms.
pub fn bourret_steady(p: &ModelParams) -> Result<BourretPrediction> {
    let (g, k, phi) = rates(p)?;
    if !(k > 0.0) {
        return Err(Error::InvalidParameter { name: "kappa", value: k });
    }
    Ok(BourretPrediction {
        full: AnalyticPrediction::new(bourret_full(g, k, phi), Regime::BourretFull),
        lowest: AnalyticPrediction::new(bourret_lowest(g, k, phi), Regime::BourretLowest),
    })
}

/// Unclipped three-term Bourret concurrence.
pub fn bourret_concurrence_raw(g: f64, k: f64, phi: f64) -> f64 {
    let a = g + 8.0 * phi;
    let b = 9.0 * g + 8.0 * phi;
    8.0 * phi / a
        - 16.0 * phi * k.sqrt() / (a * b.sqrt())
        - 32.0 * k * phi * (3.0 * g + 8.0 * phi).powi(2) / (g * a * a * b)
}

/// Bourret concurrence clipped at zero.
pub fn bourret_concurrence(p: &ModelParams) -> Result<f64> {
    let (g, k, phi) = rates(p)?;
    Ok(bourret_concurrence_raw(g, k, phi).max(0.0))
}

/// Bandwidth at which the Bourret concurrence vanishes for fixed n_th.
pub fn kappa_max(p: &ModelParams) -> Result<f64> {
    let g = p.symmetric_gamma()?;
    if !(p.n_th > 0.0) {
        return Err(Error::InvalidParameter { name: "n_th", value: p.n_th });
    }
    let f = |x: f64| {
        let k = x * g;
        bourret_concurrence_raw(g, k, k * p.n_th / 2.0)
    };
    let (mut lo, mut hi) = (1e-9, 1.0);
    if !(f(lo) > 0.0 && f(hi) < 0.0) {
        return Err(Error::NoRootInBracket { lo, hi });
    }
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi) * g)
}

/// First- and second-order coherence of the filtered source, (e^{−κτ}, 1 + e^{−2κτ}).
pub fn coherence_functions(kappa: f64, tau: f64) -> Result<(f64, f64)> {
    if !(tau >= 0.0) {
        return Err(Error::InvalidParameter { name: "tau", value: tau });
    }
    let g1 = (-kappa * tau).exp();
    Ok((g1, 1.0 + g1 * g1))
}

/// Bose–Einstein occupation 1/(e^{ħω/k_BT} − 1) at temperature `temperature_k` and frequency `frequency_hz`.
pub fn thermal_occupation(temperature_k: f64, frequency_hz: f64) -> Result<f64> {
    if !(temperature_k > 0.0) {
        return Err(Error::InvalidParameter { name: "temperature", value: temperature_k });
    }
    if !(frequency_hz > 0.0) {
        return Err(Error::InvalidParameter { name: "frequency", value: frequency_hz });
    }
    let x = HBAR * 2.0 * std::f64::consts::PI * frequency_hz / (K_B * temperature_k);
    Ok(1.0 / x.exp_m1())
}
