use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Tail population above the cutoff tolerated by the exact route.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-8;

/// Largest thermal occupation attempted with the Fock-space route.
pub const EXACT_NTH_LIMIT: f64 = 200.0;

/// Physical parameters of the source, filter cavity and qubit pair.
///
/// Rates are angular frequencies in units chosen by the caller (usually γ = 1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    pub gamma1: f64,
    pub gamma2: f64,
    /// Half the filter bandwidth.
    pub kappa: f64,
    /// Thermal occupation of the hot reservoir.
    pub n_th: f64,
    #[serde(default)]
    pub delta1: f64,
    #[serde(default)]
    pub delta2: f64,
    #[serde(default)]
    pub gamma_phi: f64,
    #[serde(default)]
    pub p_loss: f64,
    /// Number of cavity Fock levels kept. `None` selects [`ModelParams::default_cutoff`].
    #[serde(default)]
    pub fock_cutoff: Option<usize>,
    /// k₀z₁, k₀z₂ in radians for the mirror-terminated waveguide.
    #[serde(default)]
    pub positions: Option<[f64; 2]>,
}

impl ModelParams {
    /// Symmetric coupling γ₁ = γ₂ = γ, no detunings or imperfections.
    pub fn symmetric(gamma: f64, kappa: f64, n_th: f64) -> Self {
        ModelParams {
            gamma1: gamma,
            gamma2: gamma,
            kappa,
            n_th,
            delta1: 0.0,
            delta2: 0.0,
            gamma_phi: 0.0,
            p_loss: 0.0,
            fock_cutoff: None,
            positions: None,
        }
    }

    /// Photon flux Φ = κ n_th / 2.
    pub fn phi(&self) -> f64 {
        self.kappa * self.n_th / 2.0
    }

    /// Sets n_th from a flux at fixed κ.
    pub fn with_phi(mut self, phi: f64) -> Self {
        self.n_th = 2.0 * phi / self.kappa;
        self
    }

    pub fn delta_a(&self) -> f64 {
        (self.delta1 - self.delta2) / 2.0
    }

    pub fn delta_s(&self) -> f64 {
        (self.delta1 + self.delta2) / 2.0
    }

    pub fn with_cutoff(mut self, n: usize) -> Self {
        self.fock_cutoff = Some(n);
        self
    }

    pub fn with_detunings(mut self, delta1: f64, delta2: f64) -> Self {
        self.delta1 = delta1;
        self.delta2 = delta2;
        self
    }

    pub fn with_dephasing(mut self, gamma_phi: f64) -> Self {
        self.gamma_phi = gamma_phi;
        self
    }

    pub fn with_loss(mut self, p_loss: f64) -> Self {
        self.p_loss = p_loss;
        self
    }

    pub fn with_positions(mut self, k0z1: f64, k0z2: f64) -> Self {
        self.positions = Some([k0z1, k0z2]);
        self
    }

    /// The common decay rate, or an error for asymmetric couplings.
    pub fn symmetric_gamma(&self) -> Result<f64> {
        if self.gamma1 == self.gamma2 {
            Ok(self.gamma1)
        } else {
            Err(Error::AsymmetricGamma { gamma1: self.gamma1, gamma2: self.gamma2 })
        }
    }

    pub fn validate(&self) -> Result<()> {
        let checks: [(&'static str, f64); 8] = [
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("kappa", self.kappa),
            ("n_th", self.n_th),
            ("gamma_phi", self.gamma_phi),
            ("p_loss", self.p_loss),
            ("delta1", self.delta1),
            ("delta2", self.delta2),
        ];
        for (name, value) in checks {
            if !value.is_finite() {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        for (name, value) in &checks[..5] {
            if *value < 0.0 {
                return Err(Error::InvalidParameter { name, value: *value });
            }
        }
        if !(0.0..=1.0).contains(&self.p_loss) {
            return Err(Error::InvalidParameter { name: "p_loss", value: self.p_loss });
        }
        if let Some(n) = self.fock_cutoff {
            if n < 2 {
                return Err(Error::InvalidParameter { name: "fock_cutoff", value: n as f64 });
            }
        }
        if let Some([a, b]) = self.positions {
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::InvalidParameter { name: "positions", value: f64::NAN });
            }
        }
        Ok(())
    }

    /// Mean cavity occupation n_th / 2 of the filtered source.
    pub fn cavity_occupation(&self) -> f64 {
        self.n_th / 2.0
    }

    /// Smallest cutoff whose geometric tail (n̄/(n̄+1))^N is below `tol`.
    pub fn default_cutoff_for(n_th: f64, tol: f64) -> usize {
        let nbar = n_th / 2.0;
        if nbar <= 0.0 {
            return 2;
        }
        let ratio = nbar / (nbar + 1.0);
        let n = (tol.ln() / ratio.ln()).ceil() as usize;
        n.max(2)
    }

    pub fn default_cutoff(&self) -> usize {
        Self::default_cutoff_for(self.n_th, DEFAULT_TAIL_TOLERANCE)
    }

    pub fn cutoff(&self) -> usize {
        self.fock_cutoff.unwrap_or_else(|| self.default_cutoff())
    }

    /// Stationary cavity population at and above Fock level `cutoff`.
    pub fn thermal_tail(&self, cutoff: usize) -> f64 {
        let nbar = self.cavity_occupation();
        (nbar / (nbar + 1.0)).powi(cutoff as i32)
    }
}
