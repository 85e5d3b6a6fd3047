//! Full constraint check of a candidate solution.

use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::error::ModelError;
use crate::model::{compute_service_matrix, Mode, Scenario, Solution};
use crate::TOLERANCE;

/// The model constraints a solution can break.
///
/// Numbered constraints carry the row number they have in the mixed-integer
/// model (and in the LP export); the rest are bookkeeping rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// (6) left side: a used pair carries at least `ld`.
    SegmentLower,
    /// (6) right side: a pair carries at most `d_i`, and nothing when unused.
    SegmentUpper,
    /// (7) a selected data is played back completely, an unselected one not at all.
    Completeness,
    /// (8) a window carries no more than its length.
    WindowCapacity,
    /// (9) only serviceable pairs may be used.
    Service,
    /// (10) only selected data may use windows.
    Selection,
    /// (11) durations are non-negative.
    NonNegative,
    /// (12) `g` is binary.
    BinaryG,
    /// (13) `x` is binary.
    BinaryX,
    /// `q_j` is the indicator of window use.
    WindowUse,
    /// Unsegmented mode: at most one window per data.
    SingleWindow,
    /// Stored objective equals the selected priority sum.
    Objective,
}

impl Constraint {
    /// Row number in the mixed-integer model, when the rule is one of its rows.
    pub fn number(self) -> Option<u8> {
        match self {
            Constraint::SegmentLower | Constraint::SegmentUpper => Some(6),
            Constraint::Completeness => Some(7),
            Constraint::WindowCapacity => Some(8),
            Constraint::Service => Some(9),
            Constraint::Selection => Some(10),
            Constraint::NonNegative => Some(11),
            Constraint::BinaryG => Some(12),
            Constraint::BinaryX => Some(13),
            Constraint::WindowUse | Constraint::SingleWindow | Constraint::Objective => None,
        }
    }

    fn describe(self) -> &'static str {
        match self {
            Constraint::SegmentLower => "fragment shorter than minimum segment length",
            Constraint::SegmentUpper => "fragment longer than allowed",
            Constraint::Completeness => "fragments do not sum to the selected playback duration",
            Constraint::WindowCapacity => "window overfilled",
            Constraint::Service => "window opens before observation ends",
            Constraint::Selection => "window used by unselected data",
            Constraint::NonNegative => "negative duration",
            Constraint::BinaryG => "g not binary",
            Constraint::BinaryX => "x not binary",
            Constraint::WindowUse => "q inconsistent with window use",
            Constraint::SingleWindow => "data split across windows in unsegmented mode",
            Constraint::Objective => "objective differs from selected priority sum",
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.number() {
            Some(n) => write!(f, "constraint ({n}) {}", self.describe()),
            None => write!(f, "{}", self.describe()),
        }
    }
}

/// One broken constraint instance. Indices are 0-based positions.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub constraint: Constraint,
    pub data: Option<usize>,
    pub window: Option<usize>,
    /// Observed left-hand side.
    pub value: f64,
    /// The bound it was checked against.
    pub bound: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constraint)?;
        match (self.data, self.window) {
            (Some(i), Some(j)) => write!(f, " at (i={}, j={})", i + 1, j + 1)?,
            (Some(i), None) => write!(f, " at i={}", i + 1)?,
            (None, Some(j)) => write!(f, " at j={}", j + 1)?,
            (None, None) => {}
        }
        write!(f, ": value {} vs bound {}", self.value, self.bound)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error(transparent)]
    Dimension(#[from] ModelError),
    #[error("{} constraint violation(s), first: {}", .0.len(), .0[0])]
    Violations(Vec<Violation>),
}

impl ValidationError {
    pub fn violations(&self) -> &[Violation] {
        match self {
            ValidationError::Violations(v) => v,
            ValidationError::Dimension(_) => &[],
        }
    }
}

fn check_dims(scenario: &Scenario, s: &Solution) -> Result<(), ModelError> {
    let (n, m) = (scenario.n(), scenario.m());
    let dims = [
        ("x", n, s.x.len()),
        ("q", m, s.q.len()),
        ("y rows", n, s.y.rows()),
        ("y columns", m, s.y.cols()),
        ("g rows", n, s.g.rows()),
        ("g columns", m, s.g.cols()),
    ];
    for (what, expected, found) in dims {
        if expected != found {
            return Err(ModelError::Dimension { what, expected, found });
        }
    }
    Ok(())
}

/// Check every model constraint; each broken instance is reported separately.
// negated comparisons also reject NaN
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn validate_solution(
    scenario: &Scenario,
    solution: &Solution,
    mode: Mode,
) -> Result<(), ValidationError> {
    check_dims(scenario, solution)?;
    let r = compute_service_matrix(scenario);
    let ld = scenario.min_segment();
    let mut found = Vec::new();
    let mut flag = |constraint, data, window, value: f64, bound: f64| {
        found.push(Violation { constraint, data, window, value, bound });
    };

    for (i, t) in scenario.data().iter().enumerate() {
        let x = solution.x[i];
        if x > 1 {
            flag(Constraint::BinaryX, Some(i), None, f64::from(x), 1.0);
        }
        let mut total = 0.0;
        let mut used = 0u32;
        for j in 0..scenario.m() {
            let y = solution.y.get(i, j);
            let g = solution.g.get(i, j);
            let gf = f64::from(g);
            total += y;
            if g > 1 {
                flag(Constraint::BinaryG, Some(i), Some(j), gf, 1.0);
            }
            if g >= 1 {
                used += 1;
            }
            if !(y >= -TOLERANCE) {
                flag(Constraint::NonNegative, Some(i), Some(j), y, 0.0);
            }
            if gf * ld > y + TOLERANCE {
                flag(Constraint::SegmentLower, Some(i), Some(j), y, gf * ld);
            }
            if !(y <= gf * t.duration + TOLERANCE) {
                flag(Constraint::SegmentUpper, Some(i), Some(j), y, gf * t.duration);
            }
            if g > r.get(i, j) {
                flag(Constraint::Service, Some(i), Some(j), gf, f64::from(r.get(i, j)));
            }
            if g > x {
                flag(Constraint::Selection, Some(i), Some(j), gf, f64::from(x));
            }
        }
        let required = f64::from(x) * t.duration;
        if !(libm::fabs(total - required) <= TOLERANCE) {
            flag(Constraint::Completeness, Some(i), None, total, required);
        }
        if mode == Mode::Unsegmented && used > 1 {
            flag(Constraint::SingleWindow, Some(i), None, f64::from(used), 1.0);
        }
    }

    for (j, w) in scenario.windows().iter().enumerate() {
        let load: f64 = (0..scenario.n()).map(|i| solution.y.get(i, j)).sum();
        if !(load <= w.length + TOLERANCE) {
            flag(Constraint::WindowCapacity, None, Some(j), load, w.length);
        }
        let in_use = (0..scenario.n()).any(|i| solution.g.get(i, j) >= 1);
        if solution.q[j] != u8::from(in_use) {
            flag(Constraint::WindowUse, None, Some(j), f64::from(solution.q[j]), f64::from(u8::from(in_use)));
        }
    }

    let expected: u64 =
        scenario.data().iter().zip(&solution.x).map(|(t, &x)| u64::from(x) * u64::from(t.priority)).sum();
    if solution.objective != expected {
        flag(Constraint::Objective, None, None, solution.objective as f64, expected as f64);
    }

    if found.is_empty() {
        Ok(())
    } else {
        Err(ValidationError::Violations(found))
    }
}
