//! Simulation engine for gauge-mode quantum state reduction.
//!
//! The model: unitary evolution entangles a designated set of gauge boson
//! modes (photons, weak bosons) with the rest of the system. The state is
//! factored by a Schmidt decomposition across that cut, the entropy of the
//! would-be reduced mixture is tracked along the evolution, and a quantum
//! jump to a single Schmidt branch happens at the instant that entropy is
//! maximal. Repeating the cycle (evolve, find the instant, jump) produces
//! cascades whose terminal outcome probabilities are products of branch
//! probabilities along each path.
//!
//! Module map:
//! - [`state`]: sparse complex state vectors over labeled mode systems
//! - [`schmidt`]: bipartite Schmidt decomposition against the gauge modes
//! - [`evolution`]: closed-form amplitude schedules, weak-boson kinetics
//! - [`reduction`]: reduction entropy, the jump-instant solver, jump sampling
//!   and enumeration, mixed-state machinery
//! - [`cascade`]: trajectory runner, exact outcome-tree enumeration, seeded
//!   Monte Carlo ensembles
//! - [`scenarios`]: built-in physical scenarios (polarizer, absorber,
//!   emitter, detector arrays, ...)
//! - [`verify`]: the closed-form verification table used by the CLI and the
//!   acceptance test suite

pub mod cascade;
pub mod evolution;
pub mod reduction;
pub mod scenarios;
pub mod schmidt;
pub mod state;
mod svd;
pub mod tol;
pub mod verify;

pub use cascade::{
    enumerate_outcomes, run_ensemble, run_trajectory, Initial, OutcomeDistribution, Scenario,
    Trajectory,
};
pub use reduction::{
    find_reduction_instant, reduction_entropy, InstantKind, ReductionInstant, SolverConfig,
};
pub use scenarios::ScenarioParams;
pub use schmidt::{schmidt_decompose, schmidt_weights, Bipartition, SchmidtDecomposition};
pub use state::{Ensemble, ModeKind, ModeSpec, PureState, System};
