//! Domain types and the pure operations on them.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::ModelError;
use crate::units::Micros;
use crate::validate::{validate_solution, ValidationError};
use crate::{PLAYBACK_RATIO, TOLERANCE};

/// One stored observation product awaiting playback.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImagingData {
    pub id: u32,
    pub priority: u32,
    pub obs_start: f64,
    pub obs_end: f64,
    /// Playback duration in seconds.
    pub duration: f64,
}

/// A visibility interval; its capacity is its length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaybackWindow {
    pub id: u32,
    pub start: f64,
    pub end: f64,
    pub length: f64,
}

/// Whether data may be split across windows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    /// Breakpoint resume: fragments of at least `ld` in any number of windows.
    #[default]
    Segmented,
    /// Each data goes whole into a single window.
    Unsegmented,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Segmented => "sg",
            Mode::Unsegmented => "nonsg",
        }
    }

    pub fn parse(s: &str) -> Option<Mode> {
        match s {
            "sg" => Some(Mode::Segmented),
            "nonsg" => Some(Mode::Unsegmented),
            _ => None,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A validated problem instance.
///
/// Data are sorted by observation start and windows by window start; every
/// tuple satisfies its own invariants. Fields are private so that a
/// `Scenario` can only exist in a checked state.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    min_segment: f64,
    data: Vec<ImagingData>,
    windows: Vec<PlaybackWindow>,
}

impl Scenario {
    pub fn new(
        min_segment: f64,
        data: Vec<ImagingData>,
        windows: Vec<PlaybackWindow>,
    ) -> Result<Self, ModelError> {
        if !(min_segment.is_finite() && min_segment > 0.0) {
            return Err(ModelError::MinSegment(min_segment));
        }
        for (index, t) in data.iter().enumerate() {
            let bad = |reason: alloc::string::String| ModelError::Data { index, id: t.id, reason };
            if !(t.obs_start.is_finite() && t.obs_end.is_finite() && t.duration.is_finite()) {
                return Err(bad("non-finite field".into()));
            }
            if t.obs_end <= t.obs_start {
                return Err(bad(format!("observation end {} is not after start {}", t.obs_end, t.obs_start)));
            }
            if t.duration <= 0.0 {
                return Err(bad(format!("playback duration {} is not positive", t.duration)));
            }
            if t.priority < 1 {
                return Err(bad("priority must be at least 1".into()));
            }
            let expected = PLAYBACK_RATIO * (t.obs_end - t.obs_start);
            if libm::fabs(t.duration - expected) > TOLERANCE {
                return Err(bad(format!(
                    "playback duration {} differs from 4.5 x observation length = {}",
                    t.duration, expected
                )));
            }
            if index > 0 && t.obs_start < data[index - 1].obs_start {
                return Err(ModelError::Unsorted { what: "imaging data", index });
            }
        }
        for (index, w) in windows.iter().enumerate() {
            let bad = |reason: alloc::string::String| ModelError::Window { index, id: w.id, reason };
            if !(w.start.is_finite() && w.end.is_finite() && w.length.is_finite()) {
                return Err(bad("non-finite field".into()));
            }
            if w.length <= 0.0 {
                return Err(bad(format!("length {} is not positive", w.length)));
            }
            if libm::fabs(w.end - w.start - w.length) > TOLERANCE {
                return Err(bad(format!(
                    "end {} differs from start + length = {}",
                    w.end,
                    w.start + w.length
                )));
            }
            if index > 0 && w.start < windows[index - 1].start {
                return Err(ModelError::Unsorted { what: "playback windows", index });
            }
        }
        Ok(Scenario { min_segment, data, windows })
    }

    /// The same scenario under a different minimum segment length.
    pub fn with_min_segment(&self, min_segment: f64) -> Result<Self, ModelError> {
        Scenario::new(min_segment, self.data.clone(), self.windows.clone())
    }

    pub fn min_segment(&self) -> f64 {
        self.min_segment
    }

    pub fn data(&self) -> &[ImagingData] {
        &self.data
    }

    pub fn windows(&self) -> &[PlaybackWindow] {
        &self.windows
    }

    /// Number of imaging data (N).
    pub fn n(&self) -> usize {
        self.data.len()
    }

    /// Number of playback windows (M).
    pub fn m(&self) -> usize {
        self.windows.len()
    }
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    cells: Vec<T>,
}

impl<T: Copy> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix { rows, cols, cells: vec![value; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        assert!(i < self.rows && j < self.cols, "matrix index ({i}, {j}) out of bounds");
        self.cells[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        assert!(i < self.rows && j < self.cols, "matrix index ({i}, {j}) out of bounds");
        self.cells[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.cells[i * self.cols..(i + 1) * self.cols]
    }
}

/// `r[i][j] = 1` iff window `j` opens strictly after data `i` finishes observing.
pub type ServiceMatrix = Matrix<u8>;

impl ServiceMatrix {
    pub fn serves(&self, i: usize, j: usize) -> bool {
        self.get(i, j) == 1
    }

    /// Number of data each window can serve.
    pub fn column_sums(&self) -> Vec<u32> {
        (0..self.cols).map(|j| (0..self.rows).map(|i| u32::from(self.get(i, j))).sum()).collect()
    }
}

pub fn compute_service_matrix(scenario: &Scenario) -> ServiceMatrix {
    let mut r = Matrix::filled(scenario.n(), scenario.m(), 0u8);
    for (i, t) in scenario.data.iter().enumerate() {
        for (j, w) in scenario.windows.iter().enumerate() {
            if w.start > t.obs_end {
                r.set(i, j, 1);
            }
        }
    }
    r
}

/// Values of the decision variables plus the derived objective.
///
/// Fields are public so that externally supplied (and possibly corrupt)
/// solutions can be represented and checked by
/// [`validate_solution`].
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// Selection flag per data.
    pub x: Vec<u8>,
    /// Playback seconds of data `i` in window `j`.
    pub y: Matrix<f64>,
    /// Whether window `j` carries a fragment of data `i`.
    pub g: Matrix<u8>,
    /// Whether window `j` is used at all.
    pub q: Vec<u8>,
    pub objective: u64,
}

impl Solution {
    /// Nothing scheduled.
    pub fn empty(n: usize, m: usize) -> Self {
        Solution {
            x: vec![0; n],
            y: Matrix::filled(n, m, 0.0),
            g: Matrix::filled(n, m, 0),
            q: vec![0; m],
            objective: 0,
        }
    }

    /// Assemble a consistent solution from per-data fragment lists.
    ///
    /// Data with a non-empty list are selected; `q` and the objective are
    /// derived.
    pub fn from_fragments(scenario: &Scenario, fragments: &[Vec<(usize, Micros)>]) -> Self {
        assert_eq!(fragments.len(), scenario.n(), "one fragment list per data");
        let mut s = Solution::empty(scenario.n(), scenario.m());
        for (i, list) in fragments.iter().enumerate() {
            if list.is_empty() {
                continue;
            }
            s.x[i] = 1;
            s.objective += u64::from(scenario.data[i].priority);
            for &(j, amount) in list {
                s.g.set(i, j, 1);
                s.y.set(i, j, s.y.get(i, j) + amount.as_secs());
                s.q[j] = 1;
            }
        }
        s
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn m(&self) -> usize {
        self.q.len()
    }

    /// Indices of selected data.
    pub fn selected(&self) -> impl Iterator<Item = usize> + '_ {
        self.x.iter().enumerate().filter(|(_, &v)| v == 1).map(|(i, _)| i)
    }
}

pub fn evaluate_objective(scenario: &Scenario, solution: &Solution) -> Result<u64, ModelError> {
    if solution.x.len() != scenario.n() {
        return Err(ModelError::Dimension { what: "x", expected: scenario.n(), found: solution.x.len() });
    }
    Ok(scenario.data.iter().zip(&solution.x).map(|(t, &x)| u64::from(x) * u64::from(t.priority)).sum())
}

/// One contiguous piece of a data played back inside a task.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fragment {
    pub data_id: u32,
    pub duration: f64,
}

/// Executable playback action for one window.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaybackTask {
    pub window_id: u32,
    pub start: f64,
    pub end: f64,
    pub fragments: Vec<Fragment>,
}

/// Turn a valid solution into per-window playback tasks.
///
/// Fragments are laid back to back from the window start in ascending data
/// identity. Windows without fragments produce no task.
pub fn emit_playback_tasks(
    scenario: &Scenario,
    solution: &Solution,
) -> Result<Vec<PlaybackTask>, ValidationError> {
    validate_solution(scenario, solution, Mode::Segmented)?;
    let mut order: Vec<usize> = (0..scenario.n()).collect();
    order.sort_by_key(|&i| (scenario.data[i].id, i));

    let mut tasks = Vec::new();
    for (j, w) in scenario.windows.iter().enumerate() {
        if solution.q[j] == 0 {
            continue;
        }
        let fragments: Vec<Fragment> = order
            .iter()
            .filter(|&&i| solution.g.get(i, j) == 1)
            .map(|&i| Fragment { data_id: scenario.data[i].id, duration: solution.y.get(i, j) })
            .collect();
        let used: f64 = fragments.iter().map(|f| f.duration).sum();
        tasks.push(PlaybackTask { window_id: w.id, start: w.start, end: w.start + used, fragments });
    }
    Ok(tasks)
}
