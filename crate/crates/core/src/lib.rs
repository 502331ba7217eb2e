//! Steady states and dynamics of two qubits driven by a narrow-band thermal
//! source through a waveguide.
//!
//! Four independent routes compute the reduced two-qubit state:
//!
//! * [`solvers`] on the exact Fock-space Liouvillian from [`operators`],
//! * [`stochastic`] phase-space trajectories driven by an Ornstein–Uhlenbeck field,
//! * [`analytic`] closed forms (Markov, quasistatic, Bourret),
//! * [`cfrac`] matrix continued fractions over the Laguerre mode expansion.
//!
//! [`bidirectional`] covers the mirror-terminated waveguide.

// `!(x > 0.0)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analytic;
pub mod bidirectional;
pub mod cfrac;
mod error;
pub mod linalg;
pub mod operators;
pub mod parallel;
pub mod solvers;
pub mod stochastic;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use operators::ModelParams;
pub use solvers::QubitState;

/// Crate version recorded in output provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
