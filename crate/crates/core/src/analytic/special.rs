//! Exponential integral kernels.

use crate::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// e^z·E₁(z) for z > 0 without overflow.
pub fn scaled_e1(z: f64) -> f64 {
    assert!(z > 0.0, "scaled_e1 requires z > 0");
    if z < 1.0 {
        z.exp() * e1_series(z)
    } else {
        scaled_e1_cf(z)
    }
}

/// E₁(z) for z > 0.
pub fn e1(z: f64) -> f64 {
    assert!(z > 0.0, "e1 requires z > 0");
    if z < 1.0 {
        e1_series(z)
    } else {
        scaled_e1_cf(z) * (-z).exp()
    }
}

fn e1_series(z: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..200 {
        term *= -z / k as f64;
        let add = term / k as f64;
        sum += add;
        if add.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - z.ln() - sum
}

// Modified Lentz evaluation of 1/(z+1− 1²/(z+3− 2²/(z+5− …))).
fn scaled_e1_cf(z: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = z + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// Υ(x) = z e^z E₁(z) with z = 1/(8x).
pub fn upsilon(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidParameter { name: "x", value: x });
    }
    let z = 1.0 / (8.0 * x);
    Ok(z * scaled_e1(z))
}
