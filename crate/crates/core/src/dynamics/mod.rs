//! Schrödinger evolution under `H(μ(τ))` with `ħ = 1`.
//!
//! Each step applies the exact propagator of the Hamiltonian frozen at the
//! step's midpoint, built from the rank-one eigenstructure, so the state
//! norm is preserved to rounding. Step count is the only discretization
//! knob.

mod propagate;
mod schedule;
mod search;

pub use propagate::{overlap_with_target, propagate, start_state, EvolutionResult, TrajectoryPoint};
pub use schedule::{schedule_mu, ResolvedSchedule, Schedule, ScheduleKind, MIN_STEPS};
pub use search::{
    partial_plateau, required_time, run_partial_algorithm, success_probability, RequiredTime,
    SearchOptions, TrialStats,
};
