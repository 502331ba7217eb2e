//! Hilbert-space operators, superoperators and the network generators.

mod basis;
mod builders;
mod operator;
mod params;
mod superop;

pub use basis::{annihilation, ket, sigma_minus, sigma_z, singlet, triplet, TwoQubitSpace};
pub(crate) use builders::check_exact_range;
pub use builders::{
    build_full_liouvillian, build_full_liouvillian_with_tail, build_ideal_liouvillian, build_markov_liouvillian,
    build_regrouped_liouvillian, build_thermal_cavity_liouvillian, cascade_hamiltonian, drive_superoperators,
    qubit_hamiltonian, qubit_liouvillian,
};
pub use operator::Operator;
pub use params::{ModelParams, DEFAULT_TAIL_TOLERANCE, EXACT_NTH_LIMIT};
pub use superop::{Layout, LiouvilleSubspace, Superoperator};

use crate::solvers::QubitState;
use crate::C64;

/// Two-qubit state in the basis {|00⟩, |T⟩, |S⟩, |11⟩}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TripletSinglet {
    pub rho_00: f64,
    pub rho_t: f64,
    pub rho_s: f64,
    pub rho_11: f64,
    /// ⟨S|ρ|T⟩ + ⟨T|ρ|S⟩.
    pub chi_st: f64,
    /// ⟨0|ρ|S⟩ + ⟨S|ρ|0⟩ with |0⟩ ≡ |00⟩.
    pub chi_0s: f64,
    /// ⟨0|ρ|T⟩ + ⟨T|ρ|0⟩.
    pub chi_0t: f64,
}

impl TripletSinglet {
    pub fn populations(&self) -> [f64; 4] {
        [self.rho_00, self.rho_t, self.rho_s, self.rho_11]
    }
}

fn element(rho: &QubitState, bra: &[C64; 4], ket: &[C64; 4]) -> C64 {
    let m = rho.matrix();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..4 {
        for j in 0..4 {
            acc += bra[i].conj() * m[(i, j)] * ket[j];
        }
    }
    acc
}

/// Populations and coherences in the triplet–singlet basis.
pub fn triplet_singlet_transform(state: &QubitState) -> TripletSinglet {
    let (g, t, s, e) = (ket(0, 0), triplet(), singlet(), ket(1, 1));
    TripletSinglet {
        rho_00: element(state, &g, &g).re,
        rho_t: element(state, &t, &t).re,
        rho_s: element(state, &s, &s).re,
        rho_11: element(state, &e, &e).re,
        chi_st: (element(state, &s, &t) + element(state, &t, &s)).re,
        chi_0s: (element(state, &g, &s) + element(state, &s, &g)).re,
        chi_0t: (element(state, &g, &t) + element(state, &t, &g)).re,
    }
}
