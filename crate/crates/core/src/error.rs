use thiserror::Error;

/// Errors raised by model construction and the solver routes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter `{name}` is not finite or out of range: {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("Fock cutoff {cutoff} leaves a thermal tail of {tail:e} above the cutoff (limit {limit:e})")]
    CutoffTooSmall { cutoff: usize, tail: f64, limit: f64 },

    #[error("exact Fock-space route is limited to n_th <= {limit}, got {n_th}")]
    ExactRangeExceeded { n_th: f64, limit: f64 },

    #[error("symmetric decay rates required, got gamma1 = {gamma1}, gamma2 = {gamma2}")]
    AsymmetricGamma { gamma1: f64, gamma2: f64 },

    #[error("regrouped form is only an identity without photon loss (p_loss = {0})")]
    LossNotRegroupable(f64),

    #[error("qubit positions are required for the bidirectional model")]
    MissingPositions,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("generator is not trace preserving (max column trace {0:e})")]
    NotTracePreserving(f64),

    #[error("steady state is not unique or has no usable pivot ({0})")]
    DegenerateSteadyState(String),

    #[error("solver did not converge: {0}")]
    NonConvergence(String),

    #[error("singular block in continued fraction at level {level}")]
    SingularBlock { level: usize },

    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },

    #[error("time step {dt} too coarse for drive rate {rate} (limit {limit})")]
    StepTooCoarse { dt: f64, rate: f64, limit: f64 },

    #[error("invalid quantum state: {0}")]
    InvalidState(String),

    #[error("no sign change of the concurrence in the bracket [{lo}, {hi}]")]
    NoRootInBracket { lo: f64, hi: f64 },

    #[error("division by a near-zero denominator at depth {depth}")]
    NearZeroDenominator { depth: usize },

    #[error("invalid time grid: {0}")]
    InvalidTimeGrid(String),

    #[error("zero norm state")]
    ZeroNorm,

    #[error("at least {min} trajectories required, got {got}")]
    TooFewTrajectories { min: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
