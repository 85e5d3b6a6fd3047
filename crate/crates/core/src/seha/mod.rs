//! Greedy construction followed by remove/insert hill climbing.
//!
//! The search keeps a single current solution. Each iteration removes a
//! random share of the scheduled data, then tries to insert every unscheduled
//! data in random order. The pair of moves is kept only when the objective
//! strictly increases; otherwise it is rolled back. The run stops at the first
//! of: the iteration limit, the no-improvement limit, or the time limit.

mod allocate;
mod rules;
mod state;

use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

pub use allocate::{allocate_data, Fragments};
pub use rules::{contribution_order, contribution_rates, service_order, window_service_coefficients};
pub use state::{construct, insert_operator, removal_count, remove_operator, SearchContext, SearchState};

use crate::clock::Clock;
use crate::error::ModelError;
use crate::model::{Mode, Scenario, Solution};

#[derive(Debug, Clone, PartialEq)]
pub struct SehaConfig {
    pub max_iter: u64,
    /// Stop after this many consecutive non-improving iterations.
    pub noup_iter: u64,
    /// Wall-clock limit in seconds.
    pub solve_time: f64,
    /// Share of scheduled data the remove operator drops.
    pub remove_fraction: f64,
    /// Examine data by decreasing contribution rate during construction.
    pub rule1: bool,
    /// Try windows by increasing service coefficient.
    pub rule2: bool,
    pub mode: Mode,
    pub seed: u64,
}

impl Default for SehaConfig {
    fn default() -> Self {
        SehaConfig {
            max_iter: 100_000,
            noup_iter: 5_000,
            solve_time: 60.0,
            remove_fraction: 0.10,
            rule1: true,
            rule2: true,
            mode: Mode::Segmented,
            seed: 0,
        }
    }
}

impl SehaConfig {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<(), ModelError> {
        let param = |name, reason: &str| Err(ModelError::Parameter { name, reason: reason.into() });
        if self.max_iter < 1 {
            return param("max_iter", "must be at least 1");
        }
        if self.noup_iter < 1 {
            return param("noup_iter", "must be at least 1");
        }
        if !(self.solve_time > 0.0) {
            return param("solve_time", "must be positive");
        }
        if !(self.remove_fraction > 0.0 && self.remove_fraction <= 1.0) {
            return param("remove_fraction", "must lie in (0, 1]");
        }
        Ok(())
    }
}

/// Where the local search starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Start {
    /// Greedy construction with the configured rules.
    #[default]
    Heuristic,
    /// Greedy construction with both rules off (random orders).
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    MaxIter,
    NoImprovement,
    TimeLimit,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::MaxIter => "max_iter",
            StopReason::NoImprovement => "noup_iter",
            StopReason::TimeLimit => "solve_time",
        }
    }
}

/// An accepted objective value and the iteration that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TracePoint {
    pub iteration: u64,
    pub objective: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunStats {
    pub iterations: u64,
    pub improvements: u64,
    pub elapsed_secs: f64,
    pub stop: StopReason,
    /// Initial objective at iteration 0, then one point per accepted move.
    pub trace: Vec<TracePoint>,
}

fn rngs(seed: u64) -> (Xoshiro256PlusPlus, Xoshiro256PlusPlus) {
    let construction = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut search = construction.clone();
    search.jump();
    (construction, search)
}

/// Greedy construction only, as configured.
pub fn construct_greedy(scenario: &Scenario, config: &SehaConfig) -> Solution {
    let ctx = SearchContext::new(scenario, config.mode);
    let (mut rng, _) = rngs(config.seed);
    construct(&ctx, config.rule1, config.rule2, &mut rng).to_solution(&ctx)
}

pub fn run_seha<C: Clock>(
    scenario: &Scenario,
    config: &SehaConfig,
    clock: &C,
) -> Result<(Solution, RunStats), ModelError> {
    run_seha_from(scenario, config, Start::Heuristic, clock)
}

/// Full search from the chosen starting point.
///
/// The construction and search random streams are both derived from
/// `config.seed` and are independent of each other, so two runs that differ
/// only in `start` share the same search stream.
pub fn run_seha_from<C: Clock>(
    scenario: &Scenario,
    config: &SehaConfig,
    start: Start,
    clock: &C,
) -> Result<(Solution, RunStats), ModelError> {
    config.validate()?;
    let ctx = SearchContext::new(scenario, config.mode);
    let (mut construction_rng, mut rng) = rngs(config.seed);
    let mut state = match start {
        Start::Heuristic => construct(&ctx, config.rule1, config.rule2, &mut construction_rng),
        Start::Random => construct(&ctx, false, false, &mut construction_rng),
    };

    let mut trace = vec![TracePoint { iteration: 0, objective: state.objective() }];
    let mut iterations = 0u64;
    let mut improvements = 0u64;
    let mut stale = 0u64;
    let stop = loop {
        if iterations >= config.max_iter {
            break StopReason::MaxIter;
        }
        if stale >= config.noup_iter {
            break StopReason::NoImprovement;
        }
        if clock.elapsed_secs() >= config.solve_time {
            break StopReason::TimeLimit;
        }

        let before = state.objective();
        let removed = remove_operator(&ctx, &mut state, config.remove_fraction, &mut rng);
        let inserted = insert_operator(&ctx, &mut state, config.rule2, &mut rng);
        iterations += 1;

        if state.objective() > before {
            improvements += 1;
            stale = 0;
            trace.push(TracePoint { iteration: iterations, objective: state.objective() });
        } else {
            for i in inserted {
                state.unassign(&ctx, i);
            }
            for (i, fragments) in removed {
                state.assign(&ctx, i, fragments);
            }
            stale += 1;
        }
    };

    let stats = RunStats { iterations, improvements, elapsed_secs: clock.elapsed_secs(), stop, trace };
    Ok((state.to_solution(&ctx), stats))
}
