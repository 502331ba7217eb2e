#![allow(dead_code)]

/// e^z E₁(z) = ∫₀^∞ exp(−z(eˢ − 1)) ds by composite Simpson on a range
/// where the integrand has fallen below e⁻⁴⁵.
pub fn scaled_e1_quad(z: f64) -> f64 {
    assert!(z > 0.0);
    let end = (1.0 + 45.0 / z).ln();
    let n = 40_000;
    let h = end / n as f64;
    let f = |s: f64| (-z * s.exp_m1()).exp();
    let mut sum = f(0.0) + f(end);
    for k in 1..n {
        sum += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0
}

/// Thermal average ⟨γ/(γ + 8κ|α|²)⟩ for |α|² exponential with mean n_th/2.
pub fn upsilon_quad(phi_over_gamma: f64) -> f64 {
    let z = 1.0 / (8.0 * phi_over_gamma);
    z * scaled_e1_quad(z)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
