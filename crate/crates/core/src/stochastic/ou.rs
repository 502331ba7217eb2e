use crate::operators::ModelParams;
use crate::{Error, Result, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Sampled Ornstein–Uhlenbeck field α(tₖ) with ⟨|α|²⟩ = n_th/2 and
/// ⟨α*(t)α(t+τ)⟩ = (n_th/2)e^{−κτ}.
#[derive(Clone, Debug, PartialEq)]
pub struct OUPath {
    pub seed: u64,
    /// Stream index within the seed; trajectory `k` of an ensemble uses stream `k`.
    pub stream: u64,
    pub times: Vec<f64>,
    pub alpha: Vec<C64>,
}

impl OUPath {
    /// A path frozen at `alpha` on every grid point.
    pub fn constant(alpha: C64, times: &[f64]) -> Result<Self> {
        check_grid(times)?;
        Ok(OUPath { seed: 0, stream: 0, times: times.to_vec(), alpha: vec![alpha; times.len()] })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.alpha.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Polar form (r, θ) of each sample.
    pub fn polar(&self) -> Vec<(f64, f64)> {
        self.alpha.iter().map(|a| a.to_polar()).collect()
    }
}

pub(crate) fn check_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidTimeGrid("empty grid".into()));
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidTimeGrid("non-finite time".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidTimeGrid("times must be strictly increasing".into()));
    }
    Ok(())
}

/// Generator for stream `stream` of `seed`. Streams are independent, so
/// trajectory `k` draws the same numbers whatever order trajectories run in.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn complex_normal<R: Rng>(rng: &mut R, variance: f64) -> C64 {
    let sd = (variance / 2.0).sqrt();
    let x: f64 = rng.sample(StandardNormal);
    let y: f64 = rng.sample(StandardNormal);
    C64::new(sd * x, sd * y)
}

fn check_rates(kappa: f64, n_th: f64) -> Result<()> {
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::InvalidParameter { name: "kappa", value: kappa });
    }
    if !(n_th >= 0.0) || !n_th.is_finite() {
        return Err(Error::InvalidParameter { name: "n_th", value: n_th });
    }
    Ok(())
}

/// Samples α on `times` by the exact transition kernel, starting from the
/// stationary distribution.
pub fn sample_ou(kappa: f64, n_th: f64, times: &[f64], seed: u64, stream: u64) -> Result<OUPath> {
    check_rates(kappa, n_th)?;
    check_grid(times)?;
    let var = n_th / 2.0;
    let mut rng = stream_rng(seed, stream);
    let mut alpha = Vec::with_capacity(times.len());
    let mut a = complex_normal(&mut rng, var);
    alpha.push(a);
    for w in times.windows(2) {
        let decay = (-kappa * (w[1] - w[0])).exp();
        a = a * decay + complex_normal(&mut rng, var * (1.0 - decay * decay));
        alpha.push(a);
    }
    Ok(OUPath { seed, stream, times: times.to_vec(), alpha })
}

pub fn sample_ou_path(p: &ModelParams, times: &[f64], seed: u64) -> Result<OUPath> {
    sample_ou(p.kappa, p.n_th, times, seed, 0)
}
