//! Canonical JSON documents.
//!
//! Keys are written in a fixed order and every real number is rounded to six
//! decimal places. Scenarios produced by the generator live on the
//! microsecond grid, so saving and loading them is lossless.
//!
//! In solution files, assignment indices `i` and `j` are 1-based positions in
//! the scenario's `data` and `windows` arrays; task entries use the data and
//! window identities `n` and `m`.

use std::fs;
use std::path::{Path, PathBuf};

use sdsp_core::seha::{RunStats, SehaConfig};
use sdsp_core::units::snap_secs;
use sdsp_core::{
    emit_playback_tasks, ImagingData, Matrix, Mode, ModelError, PlaybackTask, PlaybackWindow, Scenario,
    Solution, ValidationError,
};
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{0}")]
    Invalid(String),
    #[error("cannot write an invalid solution: {0}")]
    Refused(#[from] ValidationError),
}

/// A [`DocError`] tied to the file it came from, or an I/O failure.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Doc { path: PathBuf, source: DocError },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataDoc {
    pub n: u32,
    pub p: u32,
    pub os: f64,
    pub oe: f64,
    pub d: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowDoc {
    pub m: u32,
    pub ds: f64,
    pub de: f64,
    pub l: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub ld: f64,
    pub data: Vec<DataDoc>,
    pub windows: Vec<WindowDoc>,
}

impl ScenarioDoc {
    pub fn from_scenario(s: &Scenario) -> Self {
        ScenarioDoc {
            ld: snap_secs(s.min_segment()),
            data: s
                .data()
                .iter()
                .map(|t| DataDoc {
                    n: t.id,
                    p: t.priority,
                    os: snap_secs(t.obs_start),
                    oe: snap_secs(t.obs_end),
                    d: snap_secs(t.duration),
                })
                .collect(),
            windows: s
                .windows()
                .iter()
                .map(|w| WindowDoc {
                    m: w.id,
                    ds: snap_secs(w.start),
                    de: snap_secs(w.end),
                    l: snap_secs(w.length),
                })
                .collect(),
        }
    }

    pub fn into_scenario(self) -> Result<Scenario, ModelError> {
        let data = self
            .data
            .into_iter()
            .map(|t| ImagingData { id: t.n, priority: t.p, obs_start: t.os, obs_end: t.oe, duration: t.d })
            .collect();
        let windows = self
            .windows
            .into_iter()
            .map(|w| PlaybackWindow { id: w.m, start: w.ds, end: w.de, length: w.l })
            .collect();
        Scenario::new(self.ld, data, windows)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentDoc {
    pub i: usize,
    pub j: usize,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FragmentDoc {
    pub n: u32,
    pub dur: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskDoc {
    pub m: u32,
    pub ts: f64,
    pub te: f64,
    pub set: Vec<FragmentDoc>,
}

impl TaskDoc {
    pub fn from_task(t: &PlaybackTask) -> Self {
        TaskDoc {
            m: t.window_id,
            ts: snap_secs(t.start),
            te: snap_secs(t.end),
            set: t
                .fragments
                .iter()
                .map(|f| FragmentDoc { n: f.data_id, dur: snap_secs(f.duration) })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionDoc {
    pub objective: u64,
    pub x: Vec<u8>,
    pub assignments: Vec<AssignmentDoc>,
    pub tasks: Vec<TaskDoc>,
}

impl SolutionDoc {
    /// Document for a valid solution; invalid solutions are refused.
    pub fn from_solution(scenario: &Scenario, solution: &Solution) -> Result<Self, DocError> {
        let tasks = emit_playback_tasks(scenario, solution)?;
        let mut assignments = Vec::new();
        for i in 0..solution.n() {
            for j in 0..solution.m() {
                if solution.g.get(i, j) == 1 {
                    assignments.push(AssignmentDoc {
                        i: i + 1,
                        j: j + 1,
                        y: snap_secs(solution.y.get(i, j)),
                    });
                }
            }
        }
        Ok(SolutionDoc {
            objective: solution.objective,
            x: solution.x.clone(),
            assignments,
            tasks: tasks.iter().map(TaskDoc::from_task).collect(),
        })
    }

    /// Rebuild the decision variables against `scenario`.
    ///
    /// Every listed assignment sets `g = 1`; `q` is derived from `g`. No
    /// constraint is checked here, so corrupt files load and are then
    /// reported by the validator.
    pub fn to_solution(&self, scenario: &Scenario) -> Result<Solution, DocError> {
        let (n, m) = (scenario.n(), scenario.m());
        let mut y = Matrix::filled(n, m, 0.0);
        let mut g = Matrix::filled(n, m, 0u8);
        for a in &self.assignments {
            if a.i == 0 || a.i > n || a.j == 0 || a.j > m {
                return Err(DocError::Invalid(format!(
                    "assignment (i={}, j={}) outside a {n}x{m} scenario",
                    a.i, a.j
                )));
            }
            if g.get(a.i - 1, a.j - 1) == 1 {
                return Err(DocError::Invalid(format!("assignment (i={}, j={}) listed twice", a.i, a.j)));
            }
            g.set(a.i - 1, a.j - 1, 1);
            y.set(a.i - 1, a.j - 1, a.y);
        }
        let q = (0..m).map(|j| u8::from((0..n).any(|i| g.get(i, j) == 1))).collect();
        Ok(Solution { x: self.x.clone(), y, g, q, objective: self.objective })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    pub max_iter: u64,
    pub noup_iter: u64,
    pub solve_time: f64,
    pub remove_fraction: f64,
    pub rule1: bool,
    pub rule2: bool,
    pub mode: String,
    pub seed: u64,
}

/// Partial config as read from a file; absent keys keep their defaults.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigPatch {
    max_iter: Option<u64>,
    noup_iter: Option<u64>,
    solve_time: Option<f64>,
    remove_fraction: Option<f64>,
    rule1: Option<bool>,
    rule2: Option<bool>,
    mode: Option<String>,
    seed: Option<u64>,
}

impl ConfigDoc {
    pub fn from_config(c: &SehaConfig) -> Self {
        ConfigDoc {
            max_iter: c.max_iter,
            noup_iter: c.noup_iter,
            solve_time: c.solve_time,
            remove_fraction: c.remove_fraction,
            rule1: c.rule1,
            rule2: c.rule2,
            mode: c.mode.as_str().to_owned(),
            seed: c.seed,
        }
    }
}

pub fn parse_mode(s: &str) -> Result<Mode, DocError> {
    Mode::parse(s)
        .ok_or_else(|| DocError::Invalid(format!("unknown mode {s:?}, expected \"sg\" or \"nonsg\"")))
}

/// Parse a config block, filling absent keys from the defaults.
pub fn config_from_json(text: &str) -> Result<SehaConfig, DocError> {
    let patch: ConfigPatch = serde_json::from_str(text)?;
    let d = SehaConfig::default();
    let config = SehaConfig {
        max_iter: patch.max_iter.unwrap_or(d.max_iter),
        noup_iter: patch.noup_iter.unwrap_or(d.noup_iter),
        solve_time: patch.solve_time.unwrap_or(d.solve_time),
        remove_fraction: patch.remove_fraction.unwrap_or(d.remove_fraction),
        rule1: patch.rule1.unwrap_or(d.rule1),
        rule2: patch.rule2.unwrap_or(d.rule2),
        mode: patch.mode.as_deref().map(parse_mode).transpose()?.unwrap_or(d.mode),
        seed: patch.seed.unwrap_or(d.seed),
    };
    config.validate()?;
    Ok(config)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracePointDoc {
    pub iteration: u64,
    pub objective: u64,
}

/// Search statistics without wall-clock figures, so that the file depends
/// only on inputs and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsDoc {
    pub iterations: u64,
    pub improvements: u64,
    pub stop_reason: String,
    pub trace: Vec<TracePointDoc>,
}

impl StatsDoc {
    pub fn from_stats(s: &RunStats) -> Self {
        StatsDoc {
            iterations: s.iterations,
            improvements: s.improvements,
            stop_reason: s.stop.as_str().to_owned(),
            trace: s
                .trace
                .iter()
                .map(|p| TracePointDoc { iteration: p.iteration, objective: p.objective })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactReportDoc {
    pub objective: u64,
    pub proven_optimal: bool,
    pub nodes: u64,
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents always serialize");
    s.push('\n');
    s
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, DocError> {
    Ok(serde_json::from_str(text)?)
}

pub fn scenario_to_json(s: &Scenario) -> String {
    to_json(&ScenarioDoc::from_scenario(s))
}

pub fn scenario_from_json(text: &str) -> Result<Scenario, DocError> {
    Ok(from_json::<ScenarioDoc>(text)?.into_scenario()?)
}

pub fn solution_to_json(scenario: &Scenario, solution: &Solution) -> Result<String, DocError> {
    Ok(to_json(&SolutionDoc::from_solution(scenario, solution)?))
}

pub fn read_text(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.to_owned(), source })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), FormatError> {
    fs::write(path, text).map_err(|source| FormatError::Io { path: path.to_owned(), source })
}

/// Attach `path` to a document error.
pub fn at<T>(path: &Path, r: Result<T, DocError>) -> Result<T, FormatError> {
    r.map_err(|source| FormatError::Doc { path: path.to_owned(), source })
}

pub fn load_scenario(path: &Path) -> Result<Scenario, FormatError> {
    at(path, scenario_from_json(&read_text(path)?))
}

pub fn save_scenario(path: &Path, s: &Scenario) -> Result<(), FormatError> {
    write_text(path, &scenario_to_json(s))
}

pub fn load_solution(path: &Path, scenario: &Scenario) -> Result<(Solution, SolutionDoc), FormatError> {
    let doc: SolutionDoc = at(path, from_json(&read_text(path)?))?;
    let solution = at(path, doc.to_solution(scenario))?;
    Ok((solution, doc))
}

pub fn save_solution(path: &Path, scenario: &Scenario, solution: &Solution) -> Result<(), FormatError> {
    write_text(path, &at(path, solution_to_json(scenario, solution))?)
}

pub fn load_config(path: &Path) -> Result<SehaConfig, FormatError> {
    at(path, config_from_json(&read_text(path)?))
}
