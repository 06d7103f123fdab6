//! Hydrodynamics of the two-species TASEP.
//!
//! Bullets hop right, circles hop left, and the two swap when they meet.
//! This crate maps densities to Riemann variables and back, solves the
//! Riemann problem, computes open-boundary steady states and their phases,
//! and simulates the lattice model to check all of it.

pub mod boundary;
pub mod error;
pub mod export;
pub mod hydro;
pub mod kmc;
pub mod phase;
pub mod riemann;
pub mod scalar;
pub mod validation;

pub use boundary::{
    bulk_riemann_vars, invert_left, invert_right, left_boundary_currents, right_boundary_currents, solve_steady_state,
    BoundaryRates, Inversion, SolverConfig, SteadyState,
};
pub use error::{Error, Result};
pub use hydro::{
    char_velocities, currents_from_rho, currents_from_z, duality_transform, in_physical_domain,
    rho_from_z, z_from_rho, CharVelocities, Currents, Densities, ModelParams, RiemannVars,
};
pub use phase::{
    classify_phase, phase_diagram_rates, phase_diagram_z, Induction, Phase, PhaseGrid, RateAxis,
    RateGrid, RateName, RateSweep,
};
pub use riemann::{
    eval_solution, fan_state_at, r0, sample_profile, shock_speed, solve_riemann, RiemannData, Wave,
    WaveFamily, WaveFanSolution,
};
pub use kmc::{run, BoundaryCurrents, Estimate, InitialFill, Measurement, SimConfig, Simulator, Site, Topology};
pub use scalar::{extremal_current, tasep_phase, tasep_riemann, TasepPhase};
