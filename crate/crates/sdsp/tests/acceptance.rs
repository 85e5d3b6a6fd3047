//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

mod common;

use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use sdsp::experiments::{
    run_comparison_on, run_initial_solution_study, run_rule_ablation, run_segmentation_on,
    run_segmentation_study, Report, Size, StudySettings, Timing,
};
use sdsp::MonotonicClock;
use sdsp_core::{
    compute_service_matrix, emit_playback_tasks, exact_solve, flow_feasible, generate_scenario, run_seha,
    validate_solution, GenParams, Micros, Mode, NeverExpires, OracleLimits, Scenario, SehaConfig, Solution,
};

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

/// `(window, start, end, [(data, duration)])`
type TaskTuple = (u32, f64, f64, Vec<(u32, f64)>);

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("1 oracle agreement on 50 small instances", oracle_agreement),
        ("2 fixture exactness", fixture_exactness),
        ("3 validator soundness under 100 mutations", validator_soundness),
        ("4 rule ablation ordering at 200x85", rule_ablation),
        ("5 initial-solution sensitivity at 200x85", initial_solution),
        ("6 segmentation benefit at 50x24 and 200x85", segmentation_benefit),
        ("7 scale run at 1000x530 with a 60 s limit", scale_run),
        ("8 byte-identical CLI outputs", determinism),
        ("9 absolute profit values and external solver runtimes", non_targets),
        ("10 flow check against grid brute force", flow_cross_check),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let result = check();
        let verdict = if result.pass { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {name}: {} [{:.1} s]", result.detail, start.elapsed().as_secs_f64());
        failed += usize::from(!result.pass);
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}

fn mean_of(report: &Report, arm: &str) -> f64 {
    report.rows_for(arm).next().and_then(|r| r.r_mean).expect("arm present")
}

fn oracle_agreement() -> Outcome {
    let start = Instant::now();
    let (mut below, mut equal, mut above) = (0, 0, 0);
    for seed in 0..50u64 {
        let n = 5 + (seed % 6) as usize;
        let m = 2 + (seed % 4) as usize;
        let scenario = generate_scenario(&GenParams::shape(n, m, seed)).unwrap();
        let config = SehaConfig { seed, ..SehaConfig::default() };
        let (heuristic, _) = run_seha(&scenario, &config, &MonotonicClock::start()).unwrap();
        let exact =
            exact_solve(&scenario, 10.0, &OracleLimits::default(), Mode::Segmented, &NeverExpires).unwrap();
        assert!(exact.proven_optimal);
        match heuristic.objective.cmp(&exact.solution.objective) {
            std::cmp::Ordering::Less => below += 1,
            std::cmp::Ordering::Equal => equal += 1,
            std::cmp::Ordering::Greater => above += 1,
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        above == 0 && equal >= 40 && secs < 60.0,
        format!("{equal}/50 optimal, {below} below, {above} above the oracle, {secs:.1} s total"),
    )
}

fn fixture_exactness() -> Outcome {
    let a = common::instance_a();
    let sg = exact_solve(&a, 10.0, &OracleLimits::default(), Mode::Segmented, &NeverExpires).unwrap();
    let nonsg = exact_solve(&a, 10.0, &OracleLimits::default(), Mode::Unsegmented, &NeverExpires).unwrap();
    let (heuristic, _) = run_seha(&a, &SehaConfig::default(), &NeverExpires).unwrap();
    let tasks: Vec<TaskTuple> = emit_playback_tasks(&a, &heuristic)
        .unwrap()
        .iter()
        .map(|t| (t.window_id, t.start, t.end, t.fragments.iter().map(|f| (f.data_id, f.duration)).collect()))
        .collect();
    let expected = vec![(1, 200.0, 250.0, vec![(1, 50.0)]), (2, 300.0, 340.0, vec![(1, 40.0)])];

    let settings = StudySettings { repeats: 3, timing: Timing::Off, ..StudySettings::default() };
    let comparison = run_comparison_on(&[("instance_a".to_owned(), a.clone())], &settings).unwrap();
    let seha_row = comparison.rows_for("seha").next().unwrap();
    let segmentation = run_segmentation_on("instance_a", &a, &settings).unwrap();

    let pass = sg.solution.objective == 6
        && sg.solution.x == vec![1, 0]
        && nonsg.solution.objective == 0
        && heuristic.objective == 6
        && tasks == expected
        && mean_of(&comparison, "oracle") == 6.0
        && seha_row.r_mean == Some(6.0)
        && seha_row.gap_r == Some(0.0)
        && mean_of(&segmentation, "SG") == 6.0
        && mean_of(&segmentation, "NonSG") == 0.0;
    outcome(
        pass,
        format!(
            "oracle {} (NonSG {}), heuristic {}, tasks {:?}, report gap {:?}",
            sg.solution.objective, nonsg.solution.objective, heuristic.objective, tasks, seha_row.gap_r
        ),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mutation {
    BelowMinimum,
    AboveDemand,
    UnselectedData,
    UnservedWindow,
    Overfill,
}

impl Mutation {
    const ALL: [Mutation; 5] = [
        Mutation::BelowMinimum,
        Mutation::AboveDemand,
        Mutation::UnselectedData,
        Mutation::UnservedWindow,
        Mutation::Overfill,
    ];

    fn expected(self) -> u8 {
        match self {
            Mutation::BelowMinimum | Mutation::AboveDemand => 6,
            Mutation::UnselectedData => 10,
            Mutation::UnservedWindow => 9,
            Mutation::Overfill => 8,
        }
    }
}

/// Apply `kind` to a random eligible variable; `None` when nothing is eligible.
fn mutate(s: &Scenario, base: &Solution, kind: Mutation, rng: &mut Xoshiro256PlusPlus) -> Option<Solution> {
    let r = compute_service_matrix(s);
    let (n, m) = (s.n(), s.m());
    let used: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).filter(|&(i, j)| base.g.get(i, j) == 1).collect();
    let pick = |cells: &[(usize, usize)], rng: &mut Xoshiro256PlusPlus| {
        (!cells.is_empty()).then(|| cells[rng.random_range(0..cells.len())])
    };
    let mut sol = base.clone();
    match kind {
        Mutation::BelowMinimum => {
            let (i, j) = pick(&used, rng)?;
            sol.y.set(i, j, s.min_segment() * rng.random_range(0.05..0.95));
        }
        Mutation::AboveDemand => {
            let (i, j) = pick(&used, rng)?;
            sol.y.set(i, j, s.data()[i].duration + rng.random_range(0.5..20.0));
        }
        Mutation::UnselectedData => {
            let cells: Vec<(usize, usize)> = (0..n)
                .filter(|&i| base.x[i] == 0)
                .flat_map(|i| (0..m).map(move |j| (i, j)))
                .filter(|&(i, j)| r.serves(i, j))
                .collect();
            let (i, j) = pick(&cells, rng)?;
            sol.g.set(i, j, 1);
            sol.y.set(i, j, s.min_segment());
            sol.q[j] = 1;
        }
        Mutation::UnservedWindow => {
            let cells: Vec<(usize, usize)> = (0..n)
                .filter(|&i| base.x[i] == 1)
                .flat_map(|i| (0..m).map(move |j| (i, j)))
                .filter(|&(i, j)| !r.serves(i, j))
                .collect();
            let (i, j) = pick(&cells, rng)?;
            sol.g.set(i, j, 1);
            sol.y.set(i, j, s.min_segment());
            sol.q[j] = 1;
        }
        Mutation::Overfill => {
            let (i, j) = pick(&used, rng)?;
            let load: f64 = (0..n).map(|k| base.y.get(k, j)).sum();
            let slack = s.windows()[j].length - load;
            sol.y.set(i, j, base.y.get(i, j) + slack + rng.random_range(0.5..20.0));
        }
    }
    Some(sol)
}

fn validator_soundness() -> Outcome {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(3);
    let (mut flagged, mut correct, mut tried) = (0, 0, 0);
    let mut misses = Vec::new();
    let mut seed = 0u64;
    while tried < 100 {
        let scenario = generate_scenario(&GenParams::shape(60, 24, 1000 + seed)).unwrap();
        let (base, _) =
            run_seha(&scenario, &SehaConfig { seed, max_iter: 200, ..SehaConfig::default() }, &NeverExpires)
                .unwrap();
        assert!(validate_solution(&scenario, &base, Mode::Segmented).is_ok());
        seed += 1;
        for kind in Mutation::ALL {
            if tried == 100 {
                break;
            }
            let Some(mutated) = mutate(&scenario, &base, kind, &mut rng) else { continue };
            tried += 1;
            if let Err(e) = validate_solution(&scenario, &mutated, Mode::Segmented) {
                flagged += 1;
                if e.violations().iter().any(|v| v.constraint.number() == Some(kind.expected())) {
                    correct += 1;
                } else {
                    misses.push(kind);
                }
            } else {
                misses.push(kind);
            }
        }
    }
    outcome(
        flagged == 100 && correct == 100,
        format!("{flagged}/100 flagged, {correct}/100 with the expected constraint, misses {misses:?}"),
    )
}

fn study_settings() -> StudySettings {
    StudySettings { repeats: 20, timing: Timing::Off, ..StudySettings::default() }
}

fn rule_ablation() -> Outcome {
    let start = Instant::now();
    let report = run_rule_ablation(&Size::exact(200, 85), &study_settings()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let [ab, a, b, none] = ["a&b", "a&!b", "!a&b", "!a&!b"].map(|arm| mean_of(&report, arm));
    let pass = ab >= a && a >= none && ab >= b && b >= none && ab - none > 0.0 && secs < 120.0;
    outcome(pass, format!("means a&b {ab:.2}, a&!b {a:.2}, !a&b {b:.2}, !a&!b {none:.2}, {secs:.1} s"))
}

fn initial_solution() -> Outcome {
    let report = run_initial_solution_study(&Size::exact(200, 85), &study_settings()).unwrap();
    let label = Size::exact(200, 85).label();
    let h: Vec<u64> = report.runs_for(&label, "H_Initial").map(|r| r.objective).collect();
    let r: Vec<u64> = report.runs_for(&label, "R_Initial").map(|r| r.objective).collect();
    let wins = h.iter().zip(&r).filter(|(h, r)| h >= r).count();
    let valid = report.runs.iter().all(|r| r.valid);
    outcome(
        h.len() == 20 && r.len() == 20 && valid && wins * 10 >= 7 * h.len(),
        format!("H_Initial >= R_Initial in {wins}/{} pairs, all valid: {valid}", h.len()),
    )
}

fn segmentation_benefit() -> Outcome {
    let sizes = [Size::exact(50, 24), Size::exact(200, 85)];
    let report = run_segmentation_study(&sizes, &study_settings()).unwrap();
    let gaps: Vec<f64> = report.rows_for("gap").map(|r| r.r_mean.unwrap()).collect();
    let valid = report.runs.iter().all(|r| r.valid);
    outcome(
        gaps.len() == 2 && gaps[0] > 0.0 && gaps[1] > 0.0 && gaps[1] >= gaps[0] && valid,
        format!("mean SG - NonSG gap {:.2} at 50x24, {:.2} at 200x85, all valid: {valid}", gaps[0], gaps[1]),
    )
}

fn scale_run() -> Outcome {
    let scenario = generate_scenario(&GenParams::shape(1000, 530, 7)).unwrap();
    // iteration limits out of reach so that the clock is what stops the run
    let config = SehaConfig {
        max_iter: u64::MAX,
        noup_iter: u64::MAX,
        solve_time: 60.0,
        seed: 7,
        ..SehaConfig::default()
    };
    let start = Instant::now();
    let (sol, stats) = run_seha(&scenario, &config, &MonotonicClock::start()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let valid = validate_solution(&scenario, &sol, Mode::Segmented).is_ok();
    outcome(
        secs <= 63.0 && valid && sol.objective > 0,
        format!(
            "objective {} after {} iterations, stopped by {}, {secs:.2} s wall, valid: {valid}",
            sol.objective,
            stats.iterations,
            stats.stop.as_str()
        ),
    )
}

/// Every file in `dir`, sorted by name, with its bytes.
fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let name = path.strip_prefix(dir).unwrap().display().to_string();
                files.push((name, std::fs::read(&path).unwrap()));
            }
        }
    }
    files.sort();
    files
}

fn determinism() -> Outcome {
    let fixture = common::fixture("instance_a.json");
    let fixture = fixture.to_str().unwrap();
    let script: Vec<Vec<&str>> = vec![
        vec!["generate", "--m", "8", "--seed", "1", "-o", "s.json"],
        vec!["generate", "--m", "30", "--n", "60", "--seed", "9", "-o", "big.json"],
        vec!["solve", "s.json", "--seed", "4", "-o", "sol.json", "--stats", "stats.json"],
        vec![
            "solve",
            "big.json",
            "--rules",
            "a",
            "--mode",
            "nonsg",
            "--start",
            "random",
            "-o",
            "sol2.json",
            "--stats",
            "stats2.json",
        ],
        vec!["validate", "s.json", "sol.json"],
        vec!["exact", fixture, "-o", "exact.json", "--report", "exact_report.json"],
        vec!["export-lp", "s.json", "-o", "model.lp"],
        vec!["export-lp", "s.json", "--mode", "nonsg", "--ld", "12", "-o", "model_nonsg.lp"],
        vec![
            "bench",
            "--study",
            "ablation",
            "--sizes",
            "40x16",
            "--repeats",
            "3",
            "--timing",
            "off",
            "-o",
            "reports",
        ],
        vec![
            "bench",
            "--study",
            "segmentation",
            "--sizes",
            "20x8,30x12",
            "--repeats",
            "2",
            "--max-iter",
            "500",
            "--timing",
            "off",
            "-o",
            "reports",
        ],
        vec![
            "bench",
            "--study",
            "comparison",
            "--sizes",
            "8x4",
            "--repeats",
            "3",
            "--timing",
            "off",
            "-o",
            "reports",
        ],
    ];
    let run = || {
        let dir = tempfile::tempdir().unwrap();
        let mut transcript = Vec::new();
        for args in &script {
            let out = common::sdsp(dir.path(), args);
            transcript.push((out.status.code(), out.stdout));
        }
        (transcript, snapshot(dir.path()))
    };
    let (first_out, first_files) = run();
    let (second_out, second_files) = run();
    let all_ok = first_out.iter().all(|(code, _)| *code == Some(0));
    let identical = first_out == second_out && first_files == second_files;
    outcome(
        all_ok && identical,
        format!(
            "{} invocations, {} output files, all exit 0: {all_ok}, identical: {identical}",
            script.len(),
            first_files.len()
        ),
    )
}

fn non_targets() -> Outcome {
    outcome(
        true,
        "documented non-target; absolute profits and external solver runtimes are not compared".to_owned(),
    )
}

fn flow_cross_check() -> Outcome {
    const UNIT: f64 = 2.5;
    const MIN_PIECE: i64 = 4;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(10);
    let (mut agree, mut feasible) = (0, 0);
    for _ in 0..200 {
        let n = rng.random_range(1..=3usize);
        let m = rng.random_range(1..=3usize);
        let demand: Vec<i64> = (0..n).map(|_| rng.random_range(4..=24)).collect();
        let capacity: Vec<i64> = (0..m).map(|_| rng.random_range(0..=28)).collect();
        let pattern: Vec<Vec<usize>> = demand
            .iter()
            .map(|&d| loop {
                let set: Vec<usize> = (0..m).filter(|_| rng.random_bool(0.5)).collect();
                if !set.is_empty() && set.len() as i64 * MIN_PIECE <= d {
                    break set;
                }
            })
            .collect();
        let micros = |v: &[i64]| v.iter().map(|&u| Micros::from_secs(u as f64 * UNIT)).collect::<Vec<_>>();
        let flow =
            flow_feasible(&micros(&demand), &pattern, &micros(&capacity), Micros::from_secs(10.0)).unwrap();
        let brute = common::brute_force_split(&demand, &pattern, &capacity, MIN_PIECE);
        agree += usize::from(flow == brute);
        feasible += usize::from(brute);
    }
    outcome(agree == 200, format!("{agree}/200 agree ({feasible} feasible)"))
}
