//! Comparative studies: heuristic against the exact oracle, heuristic-rule
//! ablation, starting-point sensitivity and segmented against unsegmented
//! playback.
//!
//! Every study is a set of independent cells `(size, repeat, arm)`. Cells run
//! in parallel and are collected in a fixed order, so reports depend only on
//! their inputs (plus wall-clock runtimes when timing is on). Within a study,
//! all arms of one repeat see the same scenario seed and the same run seed.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use sdsp_core::seha::{run_seha_from, Start};
use sdsp_core::{
    construct_greedy, exact_solve, generate_scenario, validate_solution, GenParams, Mode, ModelError,
    OracleLimits, Scenario, SehaConfig, Solution,
};
use serde::{Deserialize, Serialize};

use crate::clock::MonotonicClock;
use crate::formats::{write_text, FormatError};

pub const CSV_HEADER: &str = "label,N,M,seed,arm,R_max,R_min,R_mean,T_mean_s,Gap_R,Gap_Rbar";

pub const ABLATION_ARMS: [(&str, bool, bool); 4] =
    [("a&b", true, true), ("a&!b", true, false), ("!a&b", false, true), ("!a&!b", false, false)];

/// A scenario shape. `data: None` samples N from `a * M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Size {
    pub data: Option<usize>,
    pub windows: usize,
}

impl Size {
    pub fn exact(data: usize, windows: usize) -> Self {
        Size { data: Some(data), windows }
    }

    /// `"200x85"` (exact N) or `"85"` (sampled N).
    pub fn parse(s: &str) -> Result<Size, String> {
        let bad = || format!("invalid size {s:?}, expected NxM or M");
        match s.split_once('x') {
            Some((n, m)) => Ok(Size::exact(n.parse().map_err(|_| bad())?, m.parse().map_err(|_| bad())?)),
            None => Ok(Size { data: None, windows: s.parse().map_err(|_| bad())? }),
        }
    }

    pub fn label(&self) -> String {
        match self.data {
            Some(n) => format!("N{n}M{}", self.windows),
            None => format!("M{}", self.windows),
        }
    }

    fn params(&self, seed: u64, min_segment: f64) -> GenParams {
        GenParams { data_count: self.data, min_segment, ..GenParams::new(self.windows, seed) }
    }
}

/// Whether runtimes are recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Timing {
    #[default]
    Measured,
    Off,
}

/// Shared knobs for every study.
#[derive(Debug, Clone)]
pub struct StudySettings {
    pub repeats: usize,
    /// Base seed; repeat `k` uses `seed + k`.
    pub seed: u64,
    pub min_segment: f64,
    /// Search settings; `seed` is overridden per repeat.
    pub search: SehaConfig,
    pub oracle: OracleLimits,
    pub timing: Timing,
}

impl Default for StudySettings {
    fn default() -> Self {
        StudySettings {
            repeats: 20,
            seed: 0,
            min_segment: 10.0,
            search: SehaConfig::default(),
            oracle: OracleLimits::default(),
            timing: Timing::Measured,
        }
    }
}

/// Aggregate over the repeats of one arm at one size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub label: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub seed: u64,
    pub arm: String,
    #[serde(rename = "R_max")]
    pub r_max: Option<f64>,
    #[serde(rename = "R_min")]
    pub r_min: Option<f64>,
    #[serde(rename = "R_mean")]
    pub r_mean: Option<f64>,
    #[serde(rename = "T_mean_s")]
    pub t_mean_s: Option<f64>,
    #[serde(rename = "Gap_R")]
    pub gap_r: Option<f64>,
    #[serde(rename = "Gap_Rbar")]
    pub gap_rbar: Option<f64>,
}

/// One solver call.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub label: String,
    pub n: usize,
    pub m: usize,
    pub scenario_seed: u64,
    pub run_seed: u64,
    pub arm: String,
    pub objective: u64,
    pub runtime_s: Option<f64>,
    /// The solution passed the full validator.
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub study: String,
    pub rows: Vec<ExperimentRow>,
    pub runs: Vec<RunRecord>,
}

impl Report {
    pub fn rows_for<'a>(&'a self, arm: &'a str) -> impl Iterator<Item = &'a ExperimentRow> {
        self.rows.iter().filter(move |r| r.arm == arm)
    }

    pub fn runs_for<'a>(&'a self, label: &'a str, arm: &'a str) -> impl Iterator<Item = &'a RunRecord> {
        self.runs.iter().filter(move |r| r.label == label && r.arm == arm)
    }
}

fn timed<T>(timing: Timing, f: impl FnOnce() -> T) -> (T, Option<f64>) {
    let start = Instant::now();
    let out = f();
    let secs = start.elapsed().as_secs_f64();
    (out, (timing == Timing::Measured).then_some(secs))
}

fn scenario_for(size: &Size, seed: u64, settings: &StudySettings) -> Result<Scenario, ModelError> {
    generate_scenario(&size.params(seed, settings.min_segment))
}

#[allow(clippy::too_many_arguments)]
fn record(
    s: &Scenario,
    label: &str,
    scenario_seed: u64,
    run_seed: u64,
    arm: &str,
    sol: &Solution,
    mode: Mode,
    runtime_s: Option<f64>,
) -> RunRecord {
    RunRecord {
        label: label.to_owned(),
        n: s.n(),
        m: s.m(),
        scenario_seed,
        run_seed,
        arm: arm.to_owned(),
        objective: sol.objective,
        runtime_s,
        valid: validate_solution(s, sol, mode).is_ok(),
    }
}

/// Min, max and mean objective plus mean runtime of a group of runs.
pub fn aggregate<'a>(runs: impl IntoIterator<Item = &'a RunRecord>) -> Option<(f64, f64, f64, Option<f64>)> {
    let runs: Vec<&RunRecord> = runs.into_iter().collect();
    if runs.is_empty() {
        return None;
    }
    let values: Vec<f64> = runs.iter().map(|r| r.objective as f64).collect();
    let max = values.iter().copied().fold(f64::MIN, f64::max);
    let min = values.iter().copied().fold(f64::MAX, f64::min);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let times: Option<Vec<f64>> = runs.iter().map(|r| r.runtime_s).collect();
    let t_mean = times.map(|t| t.iter().sum::<f64>() / t.len() as f64);
    Some((max, min, mean, t_mean))
}

fn row_from_runs(label: &str, n: usize, m: usize, seed: u64, arm: &str, runs: &[RunRecord]) -> ExperimentRow {
    let agg = aggregate(runs.iter().filter(|r| r.label == label && r.arm == arm));
    ExperimentRow {
        label: label.to_owned(),
        n,
        m,
        seed,
        arm: arm.to_owned(),
        r_max: agg.map(|a| a.0),
        r_min: agg.map(|a| a.1),
        r_mean: agg.map(|a| a.2),
        t_mean_s: agg.and_then(|a| a.3),
        gap_r: None,
        gap_rbar: None,
    }
}

/// Heuristic against the exact oracle, one scenario per size generated
/// with the base seed. See [`run_comparison_on`].
pub fn run_comparison(sizes: &[Size], settings: &StudySettings) -> Result<Report, ModelError> {
    let scenarios = sizes
        .iter()
        .map(|size| Ok((size.label(), scenario_for(size, settings.seed, settings)?)))
        .collect::<Result<Vec<_>, ModelError>>()?;
    run_comparison_on(&scenarios, settings)
}

/// Heuristic against the exact oracle on the given labelled scenarios.
///
/// The heuristic runs `repeats` times with seeds `seed + k`. The oracle runs
/// once when the instance is within its limits and is then reported as the
/// `oracle` arm; otherwise the arm is `oracle-refused` with empty values.
/// Gaps are oracle minus heuristic, so a negative gap favours the heuristic.
pub fn run_comparison_on(
    scenarios: &[(String, Scenario)],
    settings: &StudySettings,
) -> Result<Report, ModelError> {
    let mut rows = Vec::new();
    let mut runs = Vec::new();
    let mode = settings.search.mode;
    for (label, scenario) in scenarios {
        let heuristic: Vec<RunRecord> = (0..settings.repeats)
            .into_par_iter()
            .map(|k| {
                let run_seed = settings.seed + k as u64;
                let config = SehaConfig { seed: run_seed, ..settings.search.clone() };
                let clock = MonotonicClock::start();
                let (result, t) =
                    timed(settings.timing, || run_seha_from(scenario, &config, Start::Heuristic, &clock));
                result.map(|(sol, _)| record(scenario, label, settings.seed, run_seed, "seha", &sol, mode, t))
            })
            .collect::<Result<_, _>>()?;
        runs.extend(heuristic);

        let clock = MonotonicClock::start();
        let (oracle, t) = timed(settings.timing, || {
            exact_solve(scenario, scenario.min_segment(), &settings.oracle, mode, &clock)
        });
        let (n, m) = (scenario.n(), scenario.m());
        let mut seha_row = row_from_runs(label, n, m, settings.seed, "seha", &runs);
        match oracle {
            Ok(out) if out.proven_optimal => {
                runs.push(record(
                    scenario,
                    label,
                    settings.seed,
                    settings.seed,
                    "oracle",
                    &out.solution,
                    mode,
                    t,
                ));
                let oracle_row = row_from_runs(label, n, m, settings.seed, "oracle", &runs);
                seha_row.gap_r = oracle_row.r_max.zip(seha_row.r_max).map(|(o, h)| o - h);
                seha_row.gap_rbar = oracle_row.r_mean.zip(seha_row.r_mean).map(|(o, h)| o - h);
                rows.push(oracle_row);
            }
            _ => rows.push(row_from_runs(label, n, m, settings.seed, "oracle-refused", &[])),
        }
        rows.push(seha_row);
    }
    Ok(Report { study: "comparison".to_owned(), rows, runs })
}

/// Construction-only objectives under the four rule combinations.
pub fn run_rule_ablation(size: &Size, settings: &StudySettings) -> Result<Report, ModelError> {
    let cells: Vec<(usize, usize)> =
        (0..settings.repeats).flat_map(|k| (0..ABLATION_ARMS.len()).map(move |a| (k, a))).collect();
    let runs: Vec<RunRecord> = cells
        .par_iter()
        .map(|&(k, a)| {
            let seed = settings.seed + k as u64;
            let scenario = scenario_for(size, seed, settings)?;
            let (arm, rule1, rule2) = ABLATION_ARMS[a];
            let config = SehaConfig { seed, rule1, rule2, ..settings.search.clone() };
            let (sol, t) = timed(settings.timing, || construct_greedy(&scenario, &config));
            Ok(record(&scenario, &size.label(), seed, seed, arm, &sol, config.mode, t))
        })
        .collect::<Result<_, ModelError>>()?;
    let rows = arm_rows(&size.label(), settings, &runs, ABLATION_ARMS.iter().map(|a| a.0));
    Ok(Report { study: "ablation".to_owned(), rows, runs })
}

/// Final objectives of full searches started from the heuristic construction
/// (`H_Initial`) and from a random construction (`R_Initial`).
pub fn run_initial_solution_study(size: &Size, settings: &StudySettings) -> Result<Report, ModelError> {
    const ARMS: [(&str, Start); 2] = [("H_Initial", Start::Heuristic), ("R_Initial", Start::Random)];
    let cells: Vec<(usize, usize)> = (0..settings.repeats).flat_map(|k| [(k, 0), (k, 1)]).collect();
    let runs: Vec<RunRecord> = cells
        .par_iter()
        .map(|&(k, a)| {
            let seed = settings.seed + k as u64;
            let scenario = scenario_for(size, seed, settings)?;
            let config = SehaConfig { seed, ..settings.search.clone() };
            let clock = MonotonicClock::start();
            let (result, t) = timed(settings.timing, || run_seha_from(&scenario, &config, ARMS[a].1, &clock));
            let (sol, _) = result?;
            Ok(record(&scenario, &size.label(), seed, seed, ARMS[a].0, &sol, config.mode, t))
        })
        .collect::<Result<_, ModelError>>()?;
    let rows = arm_rows(&size.label(), settings, &runs, ARMS.iter().map(|a| a.0));
    Ok(Report { study: "initial".to_owned(), rows, runs })
}

const SEGMENTATION_ARMS: [(&str, Mode); 2] = [("SG", Mode::Segmented), ("NonSG", Mode::Unsegmented)];

/// Paired segmented (`SG`) and unsegmented (`NonSG`) searches. The `gap`
/// row aggregates the per-pair differences SG − NonSG.
pub fn run_segmentation_study(sizes: &[Size], settings: &StudySettings) -> Result<Report, ModelError> {
    let mut rows = Vec::new();
    let mut runs = Vec::new();
    for size in sizes {
        let (r, mut block) =
            segmentation_block(&size.label(), settings, |seed| scenario_for(size, seed, settings))?;
        rows.extend(r);
        runs.append(&mut block);
    }
    Ok(Report { study: "segmentation".to_owned(), rows, runs })
}

/// [`run_segmentation_study`] on one fixed scenario; repeats differ only in
/// the search seed.
pub fn run_segmentation_on(
    label: &str,
    scenario: &Scenario,
    settings: &StudySettings,
) -> Result<Report, ModelError> {
    let (rows, runs) = segmentation_block(label, settings, |_| Ok(scenario.clone()))?;
    Ok(Report { study: "segmentation".to_owned(), rows, runs })
}

fn segmentation_block(
    label: &str,
    settings: &StudySettings,
    scenario_at: impl Fn(u64) -> Result<Scenario, ModelError> + Sync,
) -> Result<(Vec<ExperimentRow>, Vec<RunRecord>), ModelError> {
    let cells: Vec<(usize, usize)> = (0..settings.repeats).flat_map(|k| [(k, 0), (k, 1)]).collect();
    let runs: Vec<RunRecord> = cells
        .par_iter()
        .map(|&(k, a)| {
            let seed = settings.seed + k as u64;
            let scenario = scenario_at(seed)?;
            let (arm, mode) = SEGMENTATION_ARMS[a];
            let config = SehaConfig { seed, mode, ..settings.search.clone() };
            let clock = MonotonicClock::start();
            let (result, t) =
                timed(settings.timing, || run_seha_from(&scenario, &config, Start::Heuristic, &clock));
            let (sol, _) = result?;
            Ok(record(&scenario, label, seed, seed, arm, &sol, mode, t))
        })
        .collect::<Result<_, ModelError>>()?;
    let mut rows = arm_rows(label, settings, &runs, SEGMENTATION_ARMS.iter().map(|a| a.0));
    let gaps: Vec<f64> =
        runs.chunks(2).map(|pair| pair[0].objective as f64 - pair[1].objective as f64).collect();
    let template = rows[0].clone();
    rows.push(ExperimentRow {
        arm: "gap".to_owned(),
        r_max: gaps.iter().copied().reduce(f64::max),
        r_min: gaps.iter().copied().reduce(f64::min),
        r_mean: (!gaps.is_empty()).then(|| gaps.iter().sum::<f64>() / gaps.len() as f64),
        t_mean_s: None,
        ..template
    });
    Ok((rows, runs))
}

fn arm_rows<'a>(
    label: &str,
    settings: &StudySettings,
    runs: &[RunRecord],
    arms: impl Iterator<Item = &'a str>,
) -> Vec<ExperimentRow> {
    // sampled N can vary between repeats; report the first repeat's shape
    let (n, m) = runs.first().map_or((0, 0), |r| (r.n, r.m));
    arms.map(|arm| row_from_runs(label, n, m, settings.seed, arm, runs)).collect()
}

/// Plain decimal with at most six fractional digits; `None` is empty.
fn cell(v: Option<f64>) -> String {
    match v {
        None => String::new(),
        Some(v) => {
            let mut s = format!("{:.6}", v);
            while s.ends_with('0') {
                s.pop();
            }
            if s.ends_with('.') {
                s.pop();
            }
            if s == "-0" {
                s = "0".to_owned();
            }
            s
        }
    }
}

pub fn report_csv(report: &Report) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.label,
            r.n,
            r.m,
            r.seed,
            r.arm,
            cell(r.r_max),
            cell(r.r_min),
            cell(r.r_mean),
            cell(r.t_mean_s),
            cell(r.gap_r),
            cell(r.gap_rbar)
        );
    }
    out
}

pub fn report_json(report: &Report) -> String {
    crate::formats::to_json(report)
}

/// Per-arm `(N, mean objective)` series, one line per size.
pub fn plot_series(report: &Report) -> Vec<(String, String)> {
    let mut arms: Vec<&str> = Vec::new();
    for r in &report.rows {
        if !arms.contains(&r.arm.as_str()) {
            arms.push(&r.arm);
        }
    }
    arms.into_iter()
        .map(|arm| {
            let mut text = String::from("# N mean_objective\n");
            for r in report.rows_for(arm) {
                if let Some(mean) = r.r_mean {
                    let _ = writeln!(text, "{} {}", r.n, cell(Some(mean)));
                }
            }
            (arm.to_owned(), text)
        })
        .collect()
}

/// File-name-safe arm label: `!` becomes `not`, other symbols `_`.
pub fn arm_slug(arm: &str) -> String {
    arm.replace('!', "not")
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    PlotData,
}

/// Write the report in each format under `dir`, returning the written paths.
pub fn emit_report(
    report: &Report,
    dir: &Path,
    formats: &[ReportFormat],
) -> Result<Vec<PathBuf>, FormatError> {
    std::fs::create_dir_all(dir).map_err(|source| FormatError::Io { path: dir.to_owned(), source })?;
    let mut written = Vec::new();
    for format in formats {
        match format {
            ReportFormat::Csv => {
                let path = dir.join(format!("{}.csv", report.study));
                write_text(&path, &report_csv(report))?;
                written.push(path);
            }
            ReportFormat::Json => {
                let path = dir.join(format!("{}.json", report.study));
                write_text(&path, &report_json(report))?;
                written.push(path);
            }
            ReportFormat::PlotData => {
                for (arm, text) in plot_series(report) {
                    let path = dir.join(format!("{}_{}.dat", report.study, arm_slug(&arm)));
                    write_text(&path, &text)?;
                    written.push(path);
                }
            }
        }
    }
    Ok(written)
}
