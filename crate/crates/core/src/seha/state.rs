//! Incremental search state and the two move operators.

use alloc::vec::Vec;

use rand::seq::{index, SliceRandom};
use rand::Rng;

use super::allocate::{allocate_data, Fragments};
use super::rules::{contribution_order, service_order, window_service_coefficients};
use crate::model::{compute_service_matrix, Mode, Scenario, Solution};
use crate::units::Micros;

/// Per-scenario data shared by every move: integer durations and the
/// rule-driven orders.
#[derive(Debug, Clone)]
pub struct SearchContext<'a> {
    scenario: &'a Scenario,
    mode: Mode,
    min_segment: Micros,
    demand: Vec<Micros>,
    capacity: Vec<Micros>,
    priority: Vec<u64>,
    /// Serviceable windows of each data, by increasing service coefficient.
    serviceable: Vec<Vec<usize>>,
    by_contribution: Vec<usize>,
}

impl<'a> SearchContext<'a> {
    pub fn new(scenario: &'a Scenario, mode: Mode) -> Self {
        let r = compute_service_matrix(scenario);
        let windows = service_order(scenario, &window_service_coefficients(&r));
        let serviceable = (0..scenario.n())
            .map(|i| windows.iter().copied().filter(|&j| r.serves(i, j)).collect())
            .collect();
        SearchContext {
            scenario,
            mode,
            min_segment: Micros::ceil_secs(scenario.min_segment()),
            demand: scenario.data().iter().map(|t| Micros::from_secs(t.duration)).collect(),
            capacity: scenario.windows().iter().map(|w| Micros::floor_secs(w.length)).collect(),
            priority: scenario.data().iter().map(|t| u64::from(t.priority)).collect(),
            serviceable,
            by_contribution: contribution_order(scenario),
        }
    }

    pub fn scenario(&self) -> &'a Scenario {
        self.scenario
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Try to place data `i` into the current residual capacity.
    fn allocation_for<R: Rng>(
        &self,
        state: &SearchState,
        i: usize,
        service_rule: bool,
        rng: &mut R,
    ) -> Option<Fragments> {
        if self.demand[i] > state.free_total {
            return None;
        }
        if service_rule {
            allocate_data(self.demand[i], &self.serviceable[i], &state.residual, self.min_segment, self.mode)
        } else {
            let mut order = self.serviceable[i].clone();
            order.shuffle(rng);
            allocate_data(self.demand[i], &order, &state.residual, self.min_segment, self.mode)
        }
    }
}

/// Current assignment with per-window residual capacity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchState {
    fragments: Vec<Fragments>,
    residual: Vec<Micros>,
    free_total: Micros,
    objective: u64,
    scheduled: usize,
}

impl SearchState {
    pub fn empty(ctx: &SearchContext<'_>) -> Self {
        SearchState {
            fragments: alloc::vec![Vec::new(); ctx.demand.len()],
            residual: ctx.capacity.clone(),
            free_total: ctx.capacity.iter().copied().sum(),
            objective: 0,
            scheduled: 0,
        }
    }

    pub fn objective(&self) -> u64 {
        self.objective
    }

    pub fn scheduled_count(&self) -> usize {
        self.scheduled
    }

    pub fn is_scheduled(&self, i: usize) -> bool {
        !self.fragments[i].is_empty()
    }

    pub fn residual(&self) -> &[Micros] {
        &self.residual
    }

    pub fn fragments(&self, i: usize) -> &[(usize, Micros)] {
        &self.fragments[i]
    }

    pub fn scheduled(&self) -> impl Iterator<Item = usize> + '_ {
        self.fragments.iter().enumerate().filter(|(_, f)| !f.is_empty()).map(|(i, _)| i)
    }

    pub fn unscheduled(&self) -> impl Iterator<Item = usize> + '_ {
        self.fragments.iter().enumerate().filter(|(_, f)| f.is_empty()).map(|(i, _)| i)
    }

    /// Record fragments for an unscheduled data and consume capacity.
    pub fn assign(&mut self, ctx: &SearchContext<'_>, i: usize, fragments: Fragments) {
        debug_assert!(self.fragments[i].is_empty(), "data {i} already scheduled");
        debug_assert!(!fragments.is_empty());
        for &(j, amount) in &fragments {
            self.residual[j] -= amount;
            self.free_total -= amount;
            debug_assert!(self.residual[j] >= Micros::ZERO, "window {j} overfilled");
        }
        self.fragments[i] = fragments;
        self.objective += ctx.priority[i];
        self.scheduled += 1;
    }

    /// Drop a scheduled data entirely, returning its fragments.
    pub fn unassign(&mut self, ctx: &SearchContext<'_>, i: usize) -> Fragments {
        let fragments = core::mem::take(&mut self.fragments[i]);
        if !fragments.is_empty() {
            for &(j, amount) in &fragments {
                self.residual[j] += amount;
                self.free_total += amount;
            }
            self.objective -= ctx.priority[i];
            self.scheduled -= 1;
        }
        fragments
    }

    /// Try to schedule data `i`; returns whether it was placed.
    pub fn try_insert<R: Rng>(
        &mut self,
        ctx: &SearchContext<'_>,
        i: usize,
        service_rule: bool,
        rng: &mut R,
    ) -> bool {
        match ctx.allocation_for(self, i, service_rule, rng) {
            Some(f) => {
                self.assign(ctx, i, f);
                true
            }
            None => false,
        }
    }

    pub fn to_solution(&self, ctx: &SearchContext<'_>) -> Solution {
        Solution::from_fragments(ctx.scenario, &self.fragments)
    }
}

/// Greedy construction.
///
/// With `contribution_rule` data are examined by decreasing contribution
/// rate, otherwise in random order. With `service_rule` each data tries its
/// serviceable windows by increasing service coefficient, otherwise in random
/// order. Data that do not fit are skipped.
pub fn construct<R: Rng>(
    ctx: &SearchContext<'_>,
    contribution_rule: bool,
    service_rule: bool,
    rng: &mut R,
) -> SearchState {
    let mut state = SearchState::empty(ctx);
    if ctx.scenario.n() == 0 || ctx.scenario.m() == 0 {
        return state;
    }
    let order = if contribution_rule {
        ctx.by_contribution.clone()
    } else {
        let mut order: Vec<usize> = (0..ctx.scenario.n()).collect();
        order.shuffle(rng);
        order
    };
    for i in order {
        state.try_insert(ctx, i, service_rule, rng);
    }
    state
}

/// Number of data the remove operator drops from `scheduled` data.
pub fn removal_count(scheduled: usize, fraction: f64) -> usize {
    if scheduled == 0 {
        return 0;
    }
    let k = libm::ceil(fraction * scheduled as f64) as usize;
    k.clamp(1, scheduled)
}

/// Unschedule a uniformly chosen `max(1, ceil(fraction * |scheduled|))` data.
///
/// Returns the removed data with their former fragments, in removal order.
pub fn remove_operator<R: Rng>(
    ctx: &SearchContext<'_>,
    state: &mut SearchState,
    fraction: f64,
    rng: &mut R,
) -> Vec<(usize, Fragments)> {
    let scheduled: Vec<usize> = state.scheduled().collect();
    let k = removal_count(scheduled.len(), fraction);
    if k == 0 {
        return Vec::new();
    }
    index::sample(rng, scheduled.len(), k)
        .into_iter()
        .map(|pick| {
            let i = scheduled[pick];
            (i, state.unassign(ctx, i))
        })
        .collect()
}

/// Try every unscheduled data once, in random order, keeping each that fits.
///
/// Returns the inserted data.
pub fn insert_operator<R: Rng>(
    ctx: &SearchContext<'_>,
    state: &mut SearchState,
    service_rule: bool,
    rng: &mut R,
) -> Vec<usize> {
    let mut candidates: Vec<usize> = state.unscheduled().collect();
    candidates.shuffle(rng);
    candidates.into_iter().filter(|&i| state.try_insert(ctx, i, service_rule, rng)).collect()
}
