//! Downlink scheduling for Earth-observation satellites under breakpoint-resume
//! transmission.
//!
//! Imaging data may be split into fragments of at least `ld` seconds and
//! played back across several visibility windows, but only complete data earn
//! their priority. This crate holds the allocation-free-of-IO parts:
//!
//! - [`model`]: scenarios, the service matrix, solutions and playback tasks.
//! - [`validate`]: the full constraint checker.
//! - [`generator`]: seeded scenario generation.
//! - [`seha`]: greedy construction plus remove/insert hill climbing.
//! - [`oracle`]: exact enumeration for small instances, max-flow feasibility
//!   and LP-format export of the mixed-integer model.
//!
//! The crate is `no_std` and only needs `alloc`. Wall-clock limits are
//! expressed through the [`Clock`] trait so that a host crate can plug in a
//! monotonic timer.

#![no_std]

extern crate alloc;

pub mod clock;
pub mod error;
pub mod generator;
pub mod model;
pub mod oracle;
pub mod seha;
pub mod units;
pub mod validate;

pub use clock::{Clock, NeverExpires};
pub use error::ModelError;
pub use generator::{generate_scenario, GenParams};
pub use model::{
    compute_service_matrix, emit_playback_tasks, evaluate_objective, Fragment, ImagingData, Matrix, Mode,
    PlaybackTask, PlaybackWindow, Scenario, ServiceMatrix, Solution,
};
pub use oracle::{exact_solve, export_lp, flow_feasible, OracleLimits, OracleOutcome};
pub use seha::{construct_greedy, run_seha, RunStats, SehaConfig};
pub use units::Micros;
pub use validate::{validate_solution, Constraint, ValidationError, Violation};

/// Absolute tolerance (seconds) for every continuous equality and inequality check.
pub const TOLERANCE: f64 = 1e-6;

/// Playback seconds needed per second of observation.
pub const PLAYBACK_RATIO: f64 = 4.5;
