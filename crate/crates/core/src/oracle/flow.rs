//! Transportation feasibility for a fixed usage pattern, decided by max flow.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::OracleError;
use crate::seha::Fragments;
use crate::units::Micros;

/// A data→window arc with flow bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Arc {
    pub data: usize,
    pub window: usize,
    pub lower: i64,
    pub upper: i64,
}

#[derive(Debug, Clone, Copy)]
struct Edge {
    to: usize,
    rev: usize,
    cap: i64,
}

/// Dinic's algorithm on a small dense-ish graph.
struct Network {
    adj: Vec<Vec<Edge>>,
    level: Vec<i32>,
    cursor: Vec<usize>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Network { adj: vec![Vec::new(); nodes], level: vec![0; nodes], cursor: vec![0; nodes] }
    }

    /// Returns the position of the forward edge in `adj[from]`.
    fn add_edge(&mut self, from: usize, to: usize, cap: i64) -> usize {
        let fwd = self.adj[from].len();
        let back = self.adj[to].len();
        self.adj[from].push(Edge { to, rev: back, cap });
        self.adj[to].push(Edge { to: from, rev: fwd, cap: 0 });
        fwd
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for e in &self.adj[u] {
                if e.cap > 0 && self.level[e.to] < 0 {
                    self.level[e.to] = self.level[u] + 1;
                    queue.push_back(e.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: i64) -> i64 {
        if u == t {
            return pushed;
        }
        while self.cursor[u] < self.adj[u].len() {
            let e = self.adj[u][self.cursor[u]];
            if e.cap > 0 && self.level[e.to] == self.level[u] + 1 {
                let got = self.dfs(e.to, t, pushed.min(e.cap));
                if got > 0 {
                    self.adj[u][self.cursor[u]].cap -= got;
                    self.adj[e.to][e.rev].cap += got;
                    return got;
                }
            }
            self.cursor[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        while self.bfs(s, t) {
            self.cursor.iter_mut().for_each(|c| *c = 0);
            loop {
                let got = self.dfs(s, t, i64::MAX);
                if got == 0 {
                    break;
                }
                total += got;
            }
        }
        total
    }
}

/// Amount on every arc of a feasible transportation plan, if one exists.
///
/// Each data must ship exactly its demand, each window may receive at most
/// its capacity and each arc carries between its bounds. Lower bounds are
/// moved out of the network first; what remains is a plain max-flow problem.
pub(crate) fn transport(demands: &[i64], capacities: &[i64], arcs: &[Arc]) -> Option<Vec<i64>> {
    let (n, m) = (demands.len(), capacities.len());
    let mut supply = demands.to_vec();
    let mut room = capacities.to_vec();
    for a in arcs {
        if a.upper < a.lower {
            return None;
        }
        supply[a.data] -= a.lower;
        room[a.window] -= a.lower;
    }
    if supply.iter().chain(&room).any(|&v| v < 0) {
        return None;
    }

    let (source, sink) = (n + m, n + m + 1);
    let mut net = Network::new(n + m + 2);
    for (i, &s) in supply.iter().enumerate() {
        if s > 0 {
            net.add_edge(source, i, s);
        }
    }
    for (j, &r) in room.iter().enumerate() {
        if r > 0 {
            net.add_edge(n + j, sink, r);
        }
    }
    let handles: Vec<usize> =
        arcs.iter().map(|a| net.add_edge(a.data, n + a.window, a.upper - a.lower)).collect();

    let needed: i64 = supply.iter().sum();
    if net.max_flow(source, sink) != needed {
        return None;
    }
    Some(
        arcs.iter()
            .zip(handles)
            .map(|(a, h)| a.lower + (a.upper - a.lower - net.adj[a.data][h].cap))
            .collect(),
    )
}

fn check_pattern(
    demands: &[Micros],
    pattern: &[Vec<usize>],
    capacities: &[Micros],
    min_segment: Micros,
) -> Result<(), OracleError> {
    let refuse = |msg| Err(OracleError::Precondition(msg));
    if pattern.len() != demands.len() {
        return refuse(alloc::format!("pattern has {} entries for {} data", pattern.len(), demands.len()));
    }
    if min_segment <= Micros::ZERO {
        return refuse("minimum segment length must be positive".into());
    }
    for (i, windows) in pattern.iter().enumerate() {
        if windows.is_empty() {
            return refuse(alloc::format!("data #{} has an empty window set", i + 1));
        }
        if windows.iter().any(|&j| j >= capacities.len()) {
            return refuse(alloc::format!("data #{} references an unknown window", i + 1));
        }
        let mut sorted = windows.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != windows.len() {
            return refuse(alloc::format!("data #{} lists a window twice", i + 1));
        }
        if (windows.len() as i64) * min_segment.0 > demands[i].0 {
            return refuse(alloc::format!(
                "data #{} uses {} windows but cannot give each the minimum segment",
                i + 1,
                windows.len()
            ));
        }
    }
    Ok(())
}

/// Fragments realising `pattern`, if its continuous amounts can be chosen.
///
/// Data `i` must be split over exactly the windows `pattern[i]`, each piece
/// between `min_segment` and `demands[i]`, with window loads within
/// `capacities`.
pub fn flow_witness(
    demands: &[Micros],
    pattern: &[Vec<usize>],
    capacities: &[Micros],
    min_segment: Micros,
) -> Result<Option<Vec<Fragments>>, OracleError> {
    check_pattern(demands, pattern, capacities, min_segment)?;
    let arcs: Vec<Arc> = pattern
        .iter()
        .enumerate()
        .flat_map(|(i, windows)| {
            windows.iter().map(move |&j| Arc {
                data: i,
                window: j,
                lower: min_segment.0,
                upper: demands[i].0,
            })
        })
        .collect();
    let d: Vec<i64> = demands.iter().map(|v| v.0).collect();
    let c: Vec<i64> = capacities.iter().map(|v| v.0).collect();
    Ok(transport(&d, &c, &arcs).map(|amounts| {
        let mut out = vec![Vec::new(); demands.len()];
        for (a, y) in arcs.iter().zip(amounts) {
            out[a.data].push((a.window, Micros(y)));
        }
        out
    }))
}

/// Whether the fixed usage pattern admits feasible fragment lengths.
pub fn flow_feasible(
    demands: &[Micros],
    pattern: &[Vec<usize>],
    capacities: &[Micros],
    min_segment: Micros,
) -> Result<bool, OracleError> {
    flow_witness(demands, pattern, capacities, min_segment).map(|w| w.is_some())
}
