//! Dormand–Prince 5(4) integrator for linear complex systems.

use crate::{Error, Result, C64};

/// Step-size controller settings.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rtol: 1e-8, atol: 1e-10, h_min: 1e-14, max_steps: 50_000_000 }
    }
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn combo(y: &[C64], h: f64, ks: &[(&[C64], f64)], out: &mut [C64]) {
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for (k, w) in ks {
            acc += k[i] * *w;
        }
        *o = y[i] + acc * h;
    }
}

/// Integrates ẏ = f(t, y) and records `y` at every time in `grid`.
///
/// `grid` must be strictly increasing and start at the initial time.
/// `observe` receives each output index and state.
pub fn integrate<F, O>(f: F, y0: &[C64], grid: &[f64], tol: Tolerances, mut observe: O) -> Result<()>
where
    F: Fn(f64, &[C64], &mut [C64]),
    O: FnMut(usize, &[C64]) -> Result<()>,
{
    if grid.is_empty() {
        return Ok(());
    }
    for w in grid.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::InvalidTimeGrid("times must be strictly increasing".into()));
        }
    }
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut t = grid[0];
    observe(0, &y)?;
    if grid.len() == 1 {
        return Ok(());
    }
    let zero = C64::new(0.0, 0.0);
    let mut k1 = vec![zero; n];
    let mut k2 = vec![zero; n];
    let mut k3 = vec![zero; n];
    let mut k4 = vec![zero; n];
    let mut k5 = vec![zero; n];
    let mut k6 = vec![zero; n];
    let mut k7 = vec![zero; n];
    let mut tmp = vec![zero; n];
    let mut ynew = vec![zero; n];
    f(t, &y, &mut k1);
    let span = grid[grid.len() - 1] - grid[0];
    let mut h = (span / 100.0).min(grid[1] - grid[0]);
    let mut steps = 0usize;
    for (idx, &target) in grid.iter().enumerate().skip(1) {
        while t < target {
            steps += 1;
            if steps > tol.max_steps {
                return Err(Error::NonConvergence(format!("more than {} integration steps", tol.max_steps)));
            }
            let last = t + h >= target;
            let hs = if last { target - t } else { h };
            combo(&y, hs, &[(&k1, A21)], &mut tmp);
            f(t + hs / 5.0, &tmp, &mut k2);
            combo(&y, hs, &[(&k1, A31), (&k2, A32)], &mut tmp);
            f(t + 0.3 * hs, &tmp, &mut k3);
            combo(&y, hs, &[(&k1, A41), (&k2, A42), (&k3, A43)], &mut tmp);
            f(t + 0.8 * hs, &tmp, &mut k4);
            combo(&y, hs, &[(&k1, A51), (&k2, A52), (&k3, A53), (&k4, A54)], &mut tmp);
            f(t + 8.0 / 9.0 * hs, &tmp, &mut k5);
            combo(&y, hs, &[(&k1, A61), (&k2, A62), (&k3, A63), (&k4, A64), (&k5, A65)], &mut tmp);
            f(t + hs, &tmp, &mut k6);
            combo(&y, hs, &[(&k1, B1), (&k3, B3), (&k4, B4), (&k5, B5), (&k6, B6)], &mut ynew);
            f(t + hs, &ynew, &mut k7);
            let mut err: f64 = 0.0;
            for i in 0..n {
                let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * hs;
                let sc = tol.atol + tol.rtol * y[i].norm().max(ynew[i].norm());
                err = err.max(e.norm() / sc);
            }
            if err <= 1.0 || hs <= tol.h_min {
                if hs <= tol.h_min && err > 1.0 {
                    return Err(Error::StepSizeUnderflow { t });
                }
                t = if last { target } else { t + hs };
                std::mem::swap(&mut y, &mut ynew);
                std::mem::swap(&mut k1, &mut k7);
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                if !last || fac < 1.0 {
                    h = hs * fac;
                }
            } else {
                h = hs * (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
                if h < tol.h_min {
                    return Err(Error::StepSizeUnderflow { t });
                }
            }
        }
        observe(idx, &y)?;
    }
    Ok(())
}
