//! Phase-space trajectories: Ornstein–Uhlenbeck fields, conditional qubit
//! evolution, ensemble averages and the phase-diffusion model.

mod conditional;
mod ensemble;
mod ou;
mod phase;

pub use conditional::{
    conditional_steady_state, propagate_conditional, propagate_conditional_from, propagate_constant, static_dark_state,
    ConditionalTrajectory, STEP_LIMIT,
};
pub use ensemble::{
    ensemble_average, ensemble_average_with, ensemble_steady, single_trajectory, EnsembleOptions, EnsembleSteady,
    PopulationSet, SingleTrajectory, SteadyWindow, TrajectoryEnsemble, DEFAULT_TRAJECTORIES, MIN_TRAJECTORIES,
};
pub use ou::{sample_ou, sample_ou_path, stream_rng, OUPath};
pub use phase::{mean_radius, phase_diffusion_liouvillian, phase_diffusion_rate, phase_diffusion_steady};
