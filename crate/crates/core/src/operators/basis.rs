use super::Operator;
use crate::C64;

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Single-qubit lowering operator |0⟩⟨1| in the basis (|0⟩, |1⟩).
pub fn sigma_minus() -> Operator {
    Operator::from_triplets(2, vec![(0, 1, ONE)])
}

/// σᶻ = |1⟩⟨1| − |0⟩⟨0|.
pub fn sigma_z() -> Operator {
    Operator::from_triplets(2, vec![(0, 0, -ONE), (1, 1, ONE)])
}

/// Truncated bosonic annihilation operator on `cutoff` Fock levels.
pub fn annihilation(cutoff: usize) -> Operator {
    let t = (1..cutoff).map(|n| (n - 1, n, C64::new((n as f64).sqrt(), 0.0))).collect();
    Operator::from_triplets(cutoff, t)
}

/// Operators of qubit₁ ⊗ qubit₂ ⊗ cavity. A cavity dimension of 1 gives the bare qubit pair.
#[derive(Clone, Debug)]
pub struct TwoQubitSpace {
    cavity: usize,
}

impl TwoQubitSpace {
    pub fn new(cavity: usize) -> Self {
        assert!(cavity >= 1);
        TwoQubitSpace { cavity }
    }

    pub fn qubits_only() -> Self {
        Self::new(1)
    }

    pub fn dim(&self) -> usize {
        4 * self.cavity
    }

    pub fn cavity_dim(&self) -> usize {
        self.cavity
    }

    fn embed(&self, q1: &Operator, q2: &Operator, c: &Operator) -> Operator {
        q1.kron(q2).kron(c)
    }

    pub fn identity(&self) -> Operator {
        Operator::identity(self.dim())
    }

    /// σᵢ⁻ for qubit `i` ∈ {1, 2}.
    pub fn sigma_minus(&self, i: usize) -> Operator {
        let id2 = Operator::identity(2);
        let idc = Operator::identity(self.cavity);
        match i {
            1 => self.embed(&sigma_minus(), &id2, &idc),
            2 => self.embed(&id2, &sigma_minus(), &idc),
            _ => panic!("qubit index must be 1 or 2"),
        }
    }

    pub fn sigma_plus(&self, i: usize) -> Operator {
        self.sigma_minus(i).dagger()
    }

    pub fn sigma_z(&self, i: usize) -> Operator {
        let id2 = Operator::identity(2);
        let idc = Operator::identity(self.cavity);
        match i {
            1 => self.embed(&sigma_z(), &id2, &idc),
            2 => self.embed(&id2, &sigma_z(), &idc),
            _ => panic!("qubit index must be 1 or 2"),
        }
    }

    /// Collective lowering S⁻ = σ₁⁻ + σ₂⁻.
    pub fn s_minus(&self) -> Operator {
        self.sigma_minus(1).add(&self.sigma_minus(2))
    }

    pub fn s_plus(&self) -> Operator {
        self.s_minus().dagger()
    }

    /// Sᶻ = σ₁ᶻ + σ₂ᶻ.
    pub fn s_z(&self) -> Operator {
        self.sigma_z(1).add(&self.sigma_z(2))
    }

    /// Cavity annihilation operator.
    pub fn a(&self) -> Operator {
        let id2 = Operator::identity(2);
        self.embed(&id2, &id2, &annihilation(self.cavity))
    }

    /// Full-space index of |q₁ q₂⟩ ⊗ |n⟩.
    pub fn index(&self, q1: usize, q2: usize, n: usize) -> usize {
        (2 * q1 + q2) * self.cavity + n
    }
}

/// Two-qubit basis vectors in the order |00⟩, |01⟩, |10⟩, |11⟩.
pub fn ket(q1: usize, q2: usize) -> [C64; 4] {
    let mut v = [C64::new(0.0, 0.0); 4];
    v[2 * q1 + q2] = ONE;
    v
}

/// |T⟩ = (|01⟩ + |10⟩)/√2.
pub fn triplet() -> [C64; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [C64::new(0.0, 0.0), C64::new(s, 0.0), C64::new(s, 0.0), C64::new(0.0, 0.0)]
}

/// |S⟩ = (|01⟩ − |10⟩)/√2.
pub fn singlet() -> [C64; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [C64::new(0.0, 0.0), C64::new(s, 0.0), C64::new(-s, 0.0), C64::new(0.0, 0.0)]
}
