use super::PhaseSpaceGenerator;
use crate::solvers::ode::{integrate, Tolerances};
use crate::solvers::QubitState;
use crate::{Result, C64};

const M_RANGE: i64 = 2;
const M_COUNT: usize = 5;

/// Reduced qubit states μ^{0,0}(t) from the time-dependent mode hierarchy.
#[derive(Clone, Debug)]
pub struct HierarchyEvolution {
    pub times: Vec<f64>,
    pub states: Vec<QubitState>,
    pub n_max: usize,
}

impl HierarchyEvolution {
    pub fn concurrences(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.concurrence()).collect()
    }
}

/// Default truncation 4√n_th + 20 for time traces.
pub fn default_hierarchy_levels(n_th: f64) -> usize {
    (4.0 * n_th.max(0.0).sqrt()).ceil() as usize + 20
}

#[inline]
fn idx(n: usize, m: i64) -> usize {
    (n * M_COUNT + (m + M_RANGE) as usize) * 16
}

/// Integrates the coupled mode equations
///
/// μ̇^{n,m} = (𝓛_q − κ(2n+|m|))μ^{n,m} + √s 𝓛₊ Uⁿᵐ + √s 𝓛₋ Vⁿᵐ
///
/// with s = n_th/2, starting from μ^{0,0} = ρ₀ and the field in its stationary
/// distribution. Levels above `n_max` are set to zero.
pub fn evolve_hierarchy(
    g: &PhaseSpaceGenerator,
    n_max: usize,
    rho0: &QubitState,
    t_grid: &[f64],
) -> Result<HierarchyEvolution> {
    let levels = n_max + 1;
    let size = levels * M_COUNT * 16;
    let mut y0 = vec![C64::new(0.0, 0.0); size];
    let m0 = rho0.to_dmatrix();
    let root = idx(0, 0);
    y0[root..root + 16].copy_from_slice(m0.as_slice());
    let s = g.field_variance();
    let rs = s.sqrt();
    let kappa = g.kappa;
    let lq: Vec<C64> = g.lq_dense().as_slice().to_vec();
    let lp: Vec<C64> = g.lp_dense().as_slice().to_vec();
    let lm: Vec<C64> = g.lm_dense().as_slice().to_vec();

    // Column-major 16×16 times vector, accumulated with a scale.
    fn gemv(a: &[C64], x: &[C64], scale: C64, out: &mut [C64]) {
        for (j, &xj) in x.iter().enumerate() {
            if xj == C64::new(0.0, 0.0) {
                continue;
            }
            let f = xj * scale;
            let col = &a[j * 16..j * 16 + 16];
            for i in 0..16 {
                out[i] += col[i] * f;
            }
        }
    }

    let rhs = |_t: f64, y: &[C64], dy: &mut [C64]| {
        let get = |n: i64, m: i64| -> Option<&[C64]> {
            if n < 0 || n as usize >= levels || m.abs() > M_RANGE {
                None
            } else {
                let k = idx(n as usize, m);
                Some(&y[k..k + 16])
            }
        };
        let mut u = [C64::new(0.0, 0.0); 16];
        let mut v = [C64::new(0.0, 0.0); 16];
        for n in 0..levels {
            for m in -M_RANGE..=M_RANGE {
                let k = idx(n, m);
                let out = &mut dy[k..k + 16];
                out.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
                let mu = &y[k..k + 16];
                gemv(&lq, mu, C64::new(1.0, 0.0), out);
                let decay = kappa * (2 * n as i64 + m.abs()) as f64;
                for i in 0..16 {
                    out[i] -= mu[i] * decay;
                }
                let ni = n as i64;
                let nf = n as f64;
                let ma = m.abs() as f64;
                u.iter_mut().chain(v.iter_mut()).for_each(|z| *z = C64::new(0.0, 0.0));
                let acc = |buf: &mut [C64; 16], src: Option<&[C64]>, w: f64| {
                    if let Some(src) = src {
                        if w != 0.0 {
                            for i in 0..16 {
                                buf[i] += src[i] * w;
                            }
                        }
                    }
                };
                if m >= 0 {
                    acc(&mut u, get(ni, m + 1), (nf + ma + 1.0).sqrt());
                    acc(&mut u, get(ni - 1, m + 1), -nf.sqrt());
                } else {
                    acc(&mut u, get(ni, m + 1), (nf + ma).sqrt());
                    acc(&mut u, get(ni + 1, m + 1), -(nf + 1.0).sqrt());
                }
                if m <= 0 {
                    acc(&mut v, get(ni, m - 1), (nf + ma + 1.0).sqrt());
                    acc(&mut v, get(ni - 1, m - 1), -nf.sqrt());
                } else {
                    acc(&mut v, get(ni, m - 1), (nf + ma).sqrt());
                    acc(&mut v, get(ni + 1, m - 1), -(nf + 1.0).sqrt());
                }
                gemv(&lp, &u, C64::new(rs, 0.0), out);
                gemv(&lm, &v, C64::new(rs, 0.0), out);
            }
        }
    };
    let mut states = Vec::with_capacity(t_grid.len());
    integrate(rhs, &y0, t_grid, Tolerances::default(), |_, y| {
        let m = nalgebra::DMatrix::from_column_slice(4, 4, &y[root..root + 16]);
        states.push(QubitState::from_numerical(&m)?);
        Ok(())
    })?;
    Ok(HierarchyEvolution { times: t_grid.to_vec(), states, n_max })
}
