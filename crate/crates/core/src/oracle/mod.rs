//! Exact optimum for small instances.
//!
//! The search follows the natural decomposition of the problem: which data
//! to transmit, which windows each selected data uses, and how long each
//! fragment is. Candidate data subsets are visited by decreasing total
//! priority, so the first subset that admits a feasible schedule is optimal.
//! For a subset, window sets are chosen data by data; every partial choice
//! is checked by a max-flow relaxation (chosen data with their minimum
//! pieces, unchosen data free over all their serviceable windows) and pruned
//! as soon as it is infeasible. A complete choice that passes the check is a
//! feasible schedule.
//!
//! All durations are integer microseconds, so the flow computations are
//! exact.

mod flow;
mod lp;

use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

pub use flow::{flow_feasible, flow_witness};
pub use lp::export_lp;

use crate::clock::Clock;
use crate::error::ModelError;
use crate::model::{compute_service_matrix, Mode, Scenario, Solution};
use crate::seha::Fragments;
use crate::units::Micros;
use flow::{transport, Arc};

#[derive(Debug, Clone, PartialEq)]
pub struct OracleLimits {
    pub max_data: usize,
    pub max_windows: usize,
    /// Maximum number of flow checks.
    pub node_budget: u64,
    /// Wall-clock budget in seconds.
    pub time_budget: f64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_data: 12, max_windows: 6, node_budget: 20_000_000, time_budget: 60.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("instance has {found} imaging data, above the max_data limit of {limit}")]
    TooManyData { found: usize, limit: usize },
    #[error("instance has {found} playback windows, above the max_windows limit of {limit}")]
    TooManyWindows { found: usize, limit: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOutcome {
    pub solution: Solution,
    /// False when a budget ran out before optimality was established; the
    /// solution is then the empty schedule.
    pub proven_optimal: bool,
    /// Flow checks performed.
    pub nodes: u64,
}

struct Search<'c, C> {
    demand: Vec<i64>,
    capacity: Vec<i64>,
    min_segment: i64,
    serviceable: Vec<Vec<usize>>,
    patterns: Vec<Vec<Vec<usize>>>,
    nodes: u64,
    limits: OracleLimits,
    clock: &'c C,
    exhausted: bool,
}

impl<C: Clock> Search<'_, C> {
    fn out_of_budget(&mut self) -> bool {
        if self.nodes >= self.limits.node_budget
            || (self.nodes.is_multiple_of(256) && self.clock.elapsed_secs() >= self.limits.time_budget)
        {
            self.exhausted = true;
        }
        self.exhausted
    }

    /// Feasibility of `subset` when the first `chosen.len()` members use the
    /// given window sets and the rest are relaxed.
    fn check(&mut self, subset: &[usize], chosen: &[&[usize]]) -> Option<Vec<i64>> {
        self.nodes += 1;
        let mut arcs = Vec::new();
        for (k, &i) in subset.iter().enumerate() {
            match chosen.get(k) {
                Some(windows) => arcs.extend(windows.iter().map(|&j| Arc {
                    data: k,
                    window: j,
                    lower: self.min_segment,
                    upper: self.demand[i],
                })),
                None => arcs.extend(self.serviceable[i].iter().map(|&j| Arc {
                    data: k,
                    window: j,
                    lower: 0,
                    upper: self.demand[i],
                })),
            }
        }
        let demands: Vec<i64> = subset.iter().map(|&i| self.demand[i]).collect();
        transport(&demands, &self.capacity, &arcs)
    }

    fn solve_subset(&mut self, subset: &[usize]) -> Option<Vec<Fragments>> {
        let mut chosen: Vec<&[usize]> = Vec::with_capacity(subset.len());
        let patterns = core::mem::take(&mut self.patterns);
        let found = self.descend(subset, &patterns, &mut chosen);
        self.patterns = patterns;
        found
    }

    fn descend<'p>(
        &mut self,
        subset: &[usize],
        patterns: &'p [Vec<Vec<usize>>],
        chosen: &mut Vec<&'p [usize]>,
    ) -> Option<Vec<Fragments>> {
        if self.out_of_budget() {
            return None;
        }
        let flows = self.check(subset, chosen)?;
        let depth = chosen.len();
        if depth == subset.len() {
            let mut out = alloc::vec![Vec::new(); self.demand.len()];
            let mut arc = 0;
            for (k, windows) in chosen.iter().enumerate() {
                for &j in windows.iter() {
                    out[subset[k]].push((j, Micros(flows[arc])));
                    arc += 1;
                }
            }
            return Some(out);
        }
        for pattern in &patterns[subset[depth]] {
            chosen.push(pattern);
            if let Some(found) = self.descend(subset, patterns, chosen) {
                return Some(found);
            }
            chosen.pop();
            if self.exhausted {
                return None;
            }
        }
        None
    }
}

/// Non-empty subsets of `windows` no larger than `max_size`, smallest first.
fn window_subsets(windows: &[usize], max_size: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (1u64..(1u64 << windows.len()))
        .filter(|mask| (mask.count_ones() as usize) <= max_size)
        .map(|mask| windows.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &j)| j).collect())
        .collect();
    out.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Maximum-priority schedule of `scenario` with minimum segment `min_segment`.
pub fn exact_solve<C: Clock>(
    scenario: &Scenario,
    min_segment: f64,
    limits: &OracleLimits,
    mode: Mode,
    clock: &C,
) -> Result<OracleOutcome, OracleError> {
    let (n, m) = (scenario.n(), scenario.m());
    if n > limits.max_data {
        return Err(OracleError::TooManyData { found: n, limit: limits.max_data });
    }
    if m > limits.max_windows {
        return Err(OracleError::TooManyWindows { found: m, limit: limits.max_windows });
    }
    if n >= 63 || m >= 63 {
        return Err(OracleError::Precondition("enumeration supports fewer than 63 data and windows".into()));
    }
    let scenario = scenario.with_min_segment(min_segment)?;
    let r = compute_service_matrix(&scenario);
    let ld = Micros::ceil_secs(min_segment).0;
    let demand: Vec<i64> = scenario.data().iter().map(|t| Micros::from_secs(t.duration).0).collect();
    let capacity: Vec<i64> = scenario.windows().iter().map(|w| Micros::floor_secs(w.length).0).collect();
    let serviceable: Vec<Vec<usize>> =
        (0..n).map(|i| (0..m).filter(|&j| r.serves(i, j) && capacity[j] >= ld).collect()).collect();
    let patterns: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|i| {
            let most = match mode {
                Mode::Segmented => (demand[i] / ld) as usize,
                Mode::Unsegmented => 1,
            };
            if demand[i] < ld {
                Vec::new()
            } else {
                window_subsets(&serviceable[i], most)
            }
        })
        .collect();

    let total_capacity: i64 = capacity.iter().sum();
    let mut candidates: Vec<(u64, u64)> = (0u64..(1u64 << n))
        .filter_map(|mask| {
            let members = (0..n).filter(|&i| mask >> i & 1 == 1);
            let mut reward = 0u64;
            let mut load = 0i64;
            for i in members {
                if patterns[i].is_empty() {
                    return None;
                }
                reward += u64::from(scenario.data()[i].priority);
                load += demand[i];
            }
            (load <= total_capacity).then_some((reward, mask))
        })
        .collect();
    candidates.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));

    let mut search = Search {
        demand,
        capacity,
        min_segment: ld,
        serviceable,
        patterns,
        nodes: 0,
        limits: limits.clone(),
        clock,
        exhausted: false,
    };

    for (_, mask) in candidates {
        let mut subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        // fewest window-set choices first
        subset.sort_by_key(|&i| (search.patterns[i].len(), i));
        if let Some(fragments) = search.solve_subset(&subset) {
            return Ok(OracleOutcome {
                solution: Solution::from_fragments(&scenario, &fragments),
                proven_optimal: true,
                nodes: search.nodes,
            });
        }
        if search.exhausted {
            break;
        }
    }
    Ok(OracleOutcome { solution: Solution::empty(n, m), proven_optimal: false, nodes: search.nodes })
}
