mod common;

use proptest::prelude::*;
use sdsp::formats::{
    config_from_json, from_json, load_solution, save_scenario, save_solution, scenario_from_json,
    scenario_to_json, solution_to_json, to_json, ConfigDoc, SolutionDoc,
};
use sdsp_core::{generate_scenario, run_seha, GenParams, Mode, NeverExpires, SehaConfig, Solution};

fn gen_params() -> impl Strategy<Value = GenParams> {
    (1usize..40, 0u64..1000, 1.0f64..30.0, prop::option::of(1usize..80))
        .prop_map(|(m, seed, ld, n)| GenParams { min_segment: ld, data_count: n, ..GenParams::new(m, seed) })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scenario_round_trip_is_lossless(params in gen_params()) {
        let s = generate_scenario(&params).unwrap();
        let text = scenario_to_json(&s);
        let back = scenario_from_json(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(scenario_to_json(&back), text);
    }

    #[test]
    fn solution_round_trip_is_lossless(params in gen_params(), seed in 0u64..100, nonsg in any::<bool>()) {
        let s = generate_scenario(&params).unwrap();
        let mode = if nonsg { Mode::Unsegmented } else { Mode::Segmented };
        let config = SehaConfig { seed, mode, max_iter: 50, ..SehaConfig::default() };
        let (sol, _) = run_seha(&s, &config, &NeverExpires).unwrap();
        let text = solution_to_json(&s, &sol).unwrap();
        let doc: SolutionDoc = from_json(&text).unwrap();
        let back = doc.to_solution(&s).unwrap();
        prop_assert_eq!(&back, &sol);
        prop_assert_eq!(to_json(&doc), text);
    }

    #[test]
    fn config_round_trip(max_iter in 1u64..1_000_000, noup in 1u64..10_000, rho in 0.01f64..1.0, r1 in any::<bool>(), r2 in any::<bool>(), nonsg in any::<bool>(), seed in any::<u64>()) {
        let c = SehaConfig {
            max_iter,
            noup_iter: noup,
            solve_time: 12.5,
            remove_fraction: rho,
            rule1: r1,
            rule2: r2,
            mode: if nonsg { Mode::Unsegmented } else { Mode::Segmented },
            seed,
        };
        let back = config_from_json(&to_json(&ConfigDoc::from_config(&c))).unwrap();
        prop_assert_eq!(back, c);
    }
}

#[test]
fn invalid_solutions_are_not_written() {
    let a = common::instance_a();
    let mut sol = Solution::empty(a.n(), a.m());
    sol.objective = 6;
    assert!(solution_to_json(&a, &sol).is_err());
    let dir = tempfile::tempdir().unwrap();
    assert!(save_solution(&dir.path().join("s.json"), &a, &sol).is_err());
    assert!(!dir.path().join("s.json").exists());
}

#[test]
fn assignments_out_of_range_are_rejected_with_the_path() {
    let a = common::instance_a();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sol.json");
    std::fs::write(
        &path,
        r#"{"objective": 0, "x": [0, 0], "assignments": [{"i": 3, "j": 1, "y": 10.0}], "tasks": []}"#,
    )
    .unwrap();
    let err = load_solution(&path, &a).unwrap_err().to_string();
    assert!(err.contains("sol.json") && err.contains("i=3"), "{err}");

    std::fs::write(&path, r#"{"objective": 0, "x": [0, 0], "assignments": [{"i": 1, "j": 1, "y": 10.0}, {"i": 1, "j": 1, "y": 5.0}], "tasks": []}"#).unwrap();
    assert!(load_solution(&path, &a).unwrap_err().to_string().contains("twice"));
}

#[test]
fn fixture_matches_the_canonical_writer() {
    let a = common::instance_a();
    let text = std::fs::read_to_string(common::fixture("instance_a.json")).unwrap();
    assert_eq!(scenario_to_json(&a), text);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    save_scenario(&path, &a).unwrap();
    assert_eq!(std::fs::read_to_string(path).unwrap(), text);
}
