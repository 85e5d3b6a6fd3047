#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sdsp::formats::load_scenario;
use sdsp_core::Scenario;

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn instance_a() -> Scenario {
    load_scenario(&fixture("instance_a.json")).expect("fixture loads")
}

/// Run the binary in `dir`.
pub fn sdsp(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdsp")).current_dir(dir).args(args).output().expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Exhaustive search over fragment lengths on an integer grid.
///
/// Data `i` must be split over exactly the windows in `pattern[i]`, each
/// piece at least `min_piece` units, pieces summing to `demand[i]`, and no
/// window loaded beyond `capacity`.
pub fn brute_force_split(demand: &[i64], pattern: &[Vec<usize>], capacity: &[i64], min_piece: i64) -> bool {
    let mut load = vec![0i64; capacity.len()];
    split(0, 0, demand.first().copied().unwrap_or(0), demand, pattern, capacity, min_piece, &mut load)
}

#[allow(clippy::too_many_arguments)]
fn split(
    i: usize,
    k: usize,
    left: i64,
    demand: &[i64],
    pattern: &[Vec<usize>],
    capacity: &[i64],
    min_piece: i64,
    load: &mut [i64],
) -> bool {
    if i == demand.len() {
        return true;
    }
    let windows = &pattern[i];
    if k == windows.len() {
        return false;
    }
    let j = windows[k];
    let last = k + 1 == windows.len();
    let reserve = (windows.len() - k - 1) as i64 * min_piece;
    let pieces: Vec<i64> = if last { vec![left] } else { (min_piece..=left - reserve).collect() };
    for piece in pieces {
        if piece < min_piece || load[j] + piece > capacity[j] {
            continue;
        }
        load[j] += piece;
        let done = if last {
            let next = demand.get(i + 1).copied().unwrap_or(0);
            split(i + 1, 0, next, demand, pattern, capacity, min_piece, load)
        } else {
            split(i, k + 1, left - piece, demand, pattern, capacity, min_piece, load)
        };
        load[j] -= piece;
        if done {
            return true;
        }
    }
    false
}
