use crate::operators::{drive_superoperators, qubit_liouvillian, ModelParams, Superoperator};
use crate::{Error, Result, C64};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Approximation under which a phase-space generator was derived.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Approximation {
    /// Exact for the cascaded network.
    None,
    /// Qubit backaction on the cavity dropped (mirror-terminated waveguide).
    BackactionNeglected,
}

/// Qubit generator 𝓛_q and drive maps 𝓛± for μ̇ = (𝓛_q + α𝓛₊ + α*𝓛₋)μ,
/// with α an Ornstein–Uhlenbeck field of bandwidth κ and ⟨|α|²⟩ = n_th/2.
#[derive(Clone, Debug)]
pub struct PhaseSpaceGenerator {
    pub lq: Superoperator,
    pub lp: Superoperator,
    pub lm: Superoperator,
    pub kappa: f64,
    pub n_th: f64,
    pub approximation: Approximation,
    dense: [DMatrix<C64>; 3],
}

impl PhaseSpaceGenerator {
    pub fn new(
        lq: Superoperator,
        lp: Superoperator,
        lm: Superoperator,
        kappa: f64,
        n_th: f64,
        approximation: Approximation,
    ) -> Result<Self> {
        if !(kappa > 0.0) {
            return Err(Error::InvalidParameter { name: "kappa", value: kappa });
        }
        if !(n_th >= 0.0) || !n_th.is_finite() {
            return Err(Error::InvalidParameter { name: "n_th", value: n_th });
        }
        for s in [&lq, &lp, &lm] {
            if s.dim() != 4 {
                return Err(Error::DimensionMismatch("phase-space generators act on the qubit pair".into()));
            }
        }
        let dense = [lq.to_dense(), lp.to_dense(), lm.to_dense()];
        Ok(PhaseSpaceGenerator { lq, lp, lm, kappa, n_th, approximation, dense })
    }

    /// Cascaded network with the cavity mode replaced by its classical amplitude.
    pub fn from_params(p: &ModelParams) -> Result<Self> {
        p.validate()?;
        let (lp, lm) = drive_superoperators(p);
        Self::new(qubit_liouvillian(p), lp, lm, p.kappa, p.n_th, Approximation::None)
    }

    pub fn with_n_th(mut self, n_th: f64) -> Self {
        self.n_th = n_th;
        self
    }

    /// Dense 16×16 matrix of 𝓛_q.
    pub fn lq_dense(&self) -> &DMatrix<C64> {
        &self.dense[0]
    }

    pub fn lp_dense(&self) -> &DMatrix<C64> {
        &self.dense[1]
    }

    pub fn lm_dense(&self) -> &DMatrix<C64> {
        &self.dense[2]
    }

    /// 𝓛_q + α𝓛₊ + α*𝓛₋ as a dense matrix.
    pub fn conditional(&self, alpha: C64) -> DMatrix<C64> {
        &self.dense[0] + &self.dense[1] * alpha + &self.dense[2] * alpha.conj()
    }

    /// Variance ⟨|α|²⟩ = n_th/2 of the stationary field.
    pub fn field_variance(&self) -> f64 {
        self.n_th / 2.0
    }
}
