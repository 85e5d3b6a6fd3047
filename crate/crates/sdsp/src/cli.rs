//! Command-line front end.
//!
//! Exit status: 0 on success or a valid solution, 1 when `validate` finds a
//! violation, 2 on usage or parameter errors, 3 on file errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use sdsp_core::seha::{run_seha_from, Start};
use sdsp_core::{
    emit_playback_tasks, exact_solve, export_lp, generate_scenario, validate_solution, GenParams, Mode,
    ModelError, OracleLimits, Scenario, SehaConfig,
};

use crate::clock::MonotonicClock;
use crate::experiments::{
    emit_report, run_comparison, run_initial_solution_study, run_rule_ablation, run_segmentation_study,
    ReportFormat, Size, StudySettings, Timing,
};
use crate::formats::{
    load_config, load_scenario, load_solution, save_scenario, save_solution, to_json, write_text,
    ExactReportDoc, FormatError, StatsDoc, TaskDoc,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "sdsp", version, about = "Satellite downlink scheduling with breakpoint-resume playback")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random scenario.
    Generate(GenerateArgs),
    /// Schedule a scenario with greedy construction and local search.
    Solve(SolveArgs),
    /// Solve a small scenario to proven optimality.
    Exact(ExactArgs),
    /// Check a solution against every model constraint.
    Validate(ValidateArgs),
    /// Write the mixed-integer model in LP format.
    ExportLp(ExportLpArgs),
    /// Run a comparative study and write reports.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Sg,
    Nonsg,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Sg => Mode::Segmented,
            ModeArg::Nonsg => Mode::Unsegmented,
        }
    }
}

/// Which construction rules are on: `a` orders data by contribution rate,
/// `b` orders windows by service coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RulesArg {
    Ab,
    A,
    B,
    None,
}

impl RulesArg {
    fn flags(self) -> (bool, bool) {
        match self {
            RulesArg::Ab => (true, true),
            RulesArg::A => (true, false),
            RulesArg::B => (false, true),
            RulesArg::None => (false, false),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StartArg {
    Heuristic,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StudyArg {
    Comparison,
    Ablation,
    Initial,
    Segmentation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
    Plotdata,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Number of playback windows M.
    #[arg(long)]
    pub m: usize,
    /// Number of imaging data N; sampled from a*M when absent.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Minimum segment length in seconds.
    #[arg(long, default_value_t = 10.0)]
    pub ld: f64,
    /// Mean gap between consecutive observations or windows (s).
    #[arg(long, default_value_t = 100.0)]
    pub gap_mean: f64,
    /// Gap standard deviation (s).
    #[arg(long, default_value_t = 1.0)]
    pub gap_std: f64,
    /// Lower bound of the N/M ratio.
    #[arg(long, default_value_t = 1.5)]
    pub a_low: f64,
    /// Upper bound of the N/M ratio.
    #[arg(long, default_value_t = 2.5)]
    pub a_high: f64,
    /// Scenario JSON to write.
    #[arg(long, short = 'o')]
    pub out: PathBuf,
}

/// Search settings shared by `solve` and `bench`. Flags override the config
/// file, which overrides the defaults.
#[derive(Debug, Args)]
pub struct SearchArgs {
    /// JSON config block with any of max_iter, noup_iter, solve_time,
    /// remove_fraction, rule1, rule2, mode, seed.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, value_enum)]
    pub rules: Option<RulesArg>,
    #[arg(long)]
    pub max_iter: Option<u64>,
    /// Stop after this many iterations without improvement.
    #[arg(long)]
    pub noup_iter: Option<u64>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    pub time_limit: Option<f64>,
    /// Share of scheduled data dropped by each remove move.
    #[arg(long)]
    pub remove_fraction: Option<f64>,
}

impl SearchArgs {
    fn config(&self) -> Result<SehaConfig, Failure> {
        let mut c = match &self.config {
            Some(path) => load_config(path)?,
            None => SehaConfig::default(),
        };
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.mode {
            c.mode = v.into();
        }
        if let Some(v) = self.rules {
            (c.rule1, c.rule2) = v.flags();
        }
        if let Some(v) = self.max_iter {
            c.max_iter = v;
        }
        if let Some(v) = self.noup_iter {
            c.noup_iter = v;
        }
        if let Some(v) = self.time_limit {
            c.solve_time = v;
        }
        if let Some(v) = self.remove_fraction {
            c.remove_fraction = v;
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Scenario JSON.
    pub scenario: PathBuf,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Override the scenario's minimum segment length (s).
    #[arg(long)]
    pub ld: Option<f64>,
    #[arg(long, value_enum, default_value = "heuristic")]
    pub start: StartArg,
    /// Solution JSON to write.
    #[arg(long, short = 'o')]
    pub out: PathBuf,
    /// Search statistics JSON to write.
    #[arg(long)]
    pub stats: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    /// Scenario JSON.
    pub scenario: PathBuf,
    #[arg(long, value_enum, default_value = "sg")]
    pub mode: ModeArg,
    /// Override the scenario's minimum segment length (s).
    #[arg(long)]
    pub ld: Option<f64>,
    #[arg(long, default_value_t = OracleLimits::default().max_data)]
    pub max_data: usize,
    #[arg(long, default_value_t = OracleLimits::default().max_windows)]
    pub max_windows: usize,
    /// Maximum number of flow checks.
    #[arg(long, default_value_t = OracleLimits::default().node_budget)]
    pub node_budget: u64,
    /// Wall-clock budget in seconds.
    #[arg(long, default_value_t = OracleLimits::default().time_budget)]
    pub time_limit: f64,
    /// Solution JSON to write.
    #[arg(long, short = 'o')]
    pub out: PathBuf,
    /// JSON with the objective, optimality flag and node count.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Scenario JSON.
    pub scenario: PathBuf,
    /// Solution JSON.
    pub solution: PathBuf,
    #[arg(long, value_enum, default_value = "sg")]
    pub mode: ModeArg,
    /// Override the scenario's minimum segment length (s).
    #[arg(long)]
    pub ld: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ExportLpArgs {
    /// Scenario JSON.
    pub scenario: PathBuf,
    #[arg(long, value_enum, default_value = "sg")]
    pub mode: ModeArg,
    /// Override the scenario's minimum segment length (s).
    #[arg(long)]
    pub ld: Option<f64>,
    /// LP file to write.
    #[arg(long, short = 'o')]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub study: StudyArg,
    /// Comma-separated sizes, each NxM or M (N sampled).
    #[arg(long, value_delimiter = ',', default_value = "20x8")]
    pub sizes: Vec<String>,
    #[arg(long, default_value_t = 20)]
    pub repeats: usize,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Minimum segment length of generated scenarios (s).
    #[arg(long, default_value_t = 10.0)]
    pub ld: f64,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "csv,json,plotdata")]
    pub format: Vec<FormatArg>,
    /// Record runtimes; `off` leaves T_mean_s empty so reports are byte-stable.
    #[arg(long, value_enum, default_value = "on")]
    pub timing: Switch,
    /// Oracle size limit on data (comparison study).
    #[arg(long, default_value_t = OracleLimits::default().max_data)]
    pub max_data: usize,
    /// Oracle size limit on windows (comparison study).
    #[arg(long, default_value_t = OracleLimits::default().max_windows)]
    pub max_windows: usize,
    /// Report directory.
    #[arg(long, short = 'o', default_value = "reports")]
    pub out: PathBuf,
}

/// A failed command and the exit status it maps to.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Io(FormatError),
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Io(e)
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli.command) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            EXIT_IO
        }
    }
}

pub fn dispatch(command: &Command) -> Result<i32, Failure> {
    match command {
        Command::Generate(a) => generate(a),
        Command::Solve(a) => solve(a),
        Command::Exact(a) => exact(a),
        Command::Validate(a) => validate(a),
        Command::ExportLp(a) => export(a),
        Command::Bench(a) => bench(a),
    }
}

fn scenario_with_ld(path: &Path, ld: Option<f64>) -> Result<Scenario, Failure> {
    let s = load_scenario(path)?;
    Ok(match ld {
        Some(ld) => s.with_min_segment(ld)?,
        None => s,
    })
}

fn generate(a: &GenerateArgs) -> Result<i32, Failure> {
    let params = GenParams {
        windows: a.m,
        min_segment: a.ld,
        seed: a.seed,
        gap_mean: a.gap_mean,
        gap_std: a.gap_std,
        a_low: a.a_low,
        a_high: a.a_high,
        data_count: a.n,
    };
    let scenario = generate_scenario(&params)?;
    save_scenario(&a.out, &scenario)?;
    println!("wrote {} data and {} windows to {}", scenario.n(), scenario.m(), a.out.display());
    Ok(EXIT_OK)
}

fn solve(a: &SolveArgs) -> Result<i32, Failure> {
    let config = a.search.config()?;
    let scenario = scenario_with_ld(&a.scenario, a.ld)?;
    let start = match a.start {
        StartArg::Heuristic => Start::Heuristic,
        StartArg::Random => Start::Random,
    };
    let clock = MonotonicClock::start();
    let (solution, stats) = run_seha_from(&scenario, &config, start, &clock)?;
    save_solution(&a.out, &scenario, &solution)?;
    if let Some(path) = &a.stats {
        write_text(path, &to_json(&StatsDoc::from_stats(&stats)))?;
    }
    println!(
        "objective {} with {} of {} data, {} iterations, stopped by {}",
        solution.objective,
        solution.selected().count(),
        scenario.n(),
        stats.iterations,
        stats.stop.as_str()
    );
    eprintln!("search took {:.3} s", stats.elapsed_secs);
    Ok(EXIT_OK)
}

fn exact(a: &ExactArgs) -> Result<i32, Failure> {
    let scenario = scenario_with_ld(&a.scenario, a.ld)?;
    let limits = OracleLimits {
        max_data: a.max_data,
        max_windows: a.max_windows,
        node_budget: a.node_budget,
        time_budget: a.time_limit,
    };
    let clock = MonotonicClock::start();
    let outcome = exact_solve(&scenario, scenario.min_segment(), &limits, a.mode.into(), &clock)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    save_solution(&a.out, &scenario, &outcome.solution)?;
    let report = ExactReportDoc {
        objective: outcome.solution.objective,
        proven_optimal: outcome.proven_optimal,
        nodes: outcome.nodes,
    };
    if let Some(path) = &a.report {
        write_text(path, &to_json(&report))?;
    }
    if outcome.proven_optimal {
        println!("optimal objective {} after {} flow checks", report.objective, report.nodes);
    } else {
        println!("budget exhausted after {} flow checks; optimality not established", report.nodes);
    }
    Ok(EXIT_OK)
}

fn validate(a: &ValidateArgs) -> Result<i32, Failure> {
    let scenario = scenario_with_ld(&a.scenario, a.ld)?;
    let (solution, doc) = load_solution(&a.solution, &scenario)?;
    let violations = match validate_solution(&scenario, &solution, a.mode.into()) {
        Ok(()) => Vec::new(),
        Err(e) => match e.violations() {
            [] => return Err(Failure::Io(FormatError::Doc { path: a.solution.clone(), source: e.into() })),
            v => v.iter().map(ToString::to_string).collect(),
        },
    };
    if !violations.is_empty() {
        println!("invalid: {} violation(s)", violations.len());
        for v in &violations {
            println!("  {v}");
        }
        return Ok(EXIT_INVALID);
    }
    let expected: Vec<TaskDoc> = emit_playback_tasks(&scenario, &solution)
        .expect("a valid solution emits tasks")
        .iter()
        .map(TaskDoc::from_task)
        .collect();
    if expected != doc.tasks {
        println!("invalid: listed playback tasks differ from the assignments");
        return Ok(EXIT_INVALID);
    }
    println!("valid: objective {}", solution.objective);
    Ok(EXIT_OK)
}

fn export(a: &ExportLpArgs) -> Result<i32, Failure> {
    let scenario = scenario_with_ld(&a.scenario, a.ld)?;
    write_text(&a.out, &export_lp(&scenario, scenario.min_segment(), a.mode.into()))?;
    println!("wrote LP model to {}", a.out.display());
    Ok(EXIT_OK)
}

fn bench(a: &BenchArgs) -> Result<i32, Failure> {
    let search = a.search.config()?;
    let sizes =
        a.sizes.iter().map(|s| Size::parse(s)).collect::<Result<Vec<_>, _>>().map_err(Failure::Usage)?;
    if sizes.is_empty() || a.repeats == 0 {
        return Err(Failure::Usage("bench needs at least one size and one repeat".into()));
    }
    let settings = StudySettings {
        repeats: a.repeats,
        seed: search.seed,
        min_segment: a.ld,
        oracle: OracleLimits { max_data: a.max_data, max_windows: a.max_windows, ..OracleLimits::default() },
        search,
        timing: match a.timing {
            Switch::On => Timing::Measured,
            Switch::Off => Timing::Off,
        },
    };
    let single = || -> Result<&Size, Failure> {
        match sizes.as_slice() {
            [one] => Ok(one),
            _ => Err(Failure::Usage("this study takes exactly one size".into())),
        }
    };
    let report = match a.study {
        StudyArg::Comparison => run_comparison(&sizes, &settings)?,
        StudyArg::Ablation => run_rule_ablation(single()?, &settings)?,
        StudyArg::Initial => run_initial_solution_study(single()?, &settings)?,
        StudyArg::Segmentation => run_segmentation_study(&sizes, &settings)?,
    };
    let formats: Vec<ReportFormat> = a
        .format
        .iter()
        .map(|f| match f {
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Json => ReportFormat::Json,
            FormatArg::Plotdata => ReportFormat::PlotData,
        })
        .collect();
    let written = emit_report(&report, &a.out, &formats)?;
    for r in &report.rows {
        let mean = r.r_mean.map_or_else(|| "-".to_owned(), |v| format!("{v:.2}"));
        println!("{:<12} {:<16} mean {}", r.label, r.arm, mean);
    }
    println!("wrote {} file(s) to {}", written.len(), a.out.display());
    Ok(EXIT_OK)
}
