//! Laguerre-mode expansion of the phase-space equation: matrix continued
//! fractions, the three-level scalar reduction and its closed forms.

mod generator;
mod hierarchy;
mod mcf;
mod reduced;

pub use generator::{Approximation, PhaseSpaceGenerator};
pub use hierarchy::{default_hierarchy_levels, evolve_hierarchy, HierarchyEvolution};
pub use mcf::{
    default_ceiling, default_start, mcf_depth_zero, mcf_escalate, mcf_fixed, mcf_lowest_order, mcf_modes, mcf_steady,
    CfracSolution, ModeCoefficients, CONVERGENCE_TOL,
};
pub use reduced::{
    closed_form_concurrence, closed_form_populations, effective_flux, golden_section_max, optimal_occupation,
    scalar_cf_converged, scalar_cf_eval, three_level_cf_steady, ClosedFormPopulations, OptimalOccupation, ScalarCf,
    ThreeLevelSolution,
};
