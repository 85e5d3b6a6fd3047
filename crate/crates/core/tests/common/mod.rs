#![allow(dead_code)]

use sdsp_core::{ImagingData, PlaybackWindow, Scenario};

pub fn data(id: u32, p: u32, os: f64, d: f64) -> ImagingData {
    ImagingData { id, priority: p, obs_start: os, obs_end: os + d / 4.5, duration: d }
}

pub fn window(id: u32, ds: f64, l: f64) -> PlaybackWindow {
    PlaybackWindow { id, start: ds, end: ds + l, length: l }
}

/// Two 90 s data (priorities 6 and 4) and windows of 50, 50 and 30 s, all
/// serviceable, with `ld = 10`.
pub fn instance_a() -> Scenario {
    Scenario::new(
        10.0,
        vec![data(1, 6, 0.0, 90.0), data(2, 4, 100.0, 90.0)],
        vec![window(1, 200.0, 50.0), window(2, 300.0, 50.0), window(3, 400.0, 30.0)],
    )
    .unwrap()
}

/// Grid search for fragment lengths: data `i` must be split over exactly the
/// windows in `pattern[i]`, every piece a multiple of `step` in
/// `[min_piece, demand]`. All quantities are in grid units.
pub fn grid_feasible(demand: &[u32], pattern: &[Vec<usize>], capacity: &[u32], min_piece: u32) -> bool {
    fn place(
        i: usize,
        k: usize,
        left: u32,
        demand: &[u32],
        pattern: &[Vec<usize>],
        room: &mut Vec<i64>,
        min_piece: u32,
    ) -> bool {
        if i == demand.len() {
            return true;
        }
        let windows = &pattern[i];
        if k == windows.len() - 1 {
            let j = windows[k];
            if left < min_piece || i64::from(left) > room[j] {
                return false;
            }
            room[j] -= i64::from(left);
            let ok = if i + 1 < demand.len() {
                place(i + 1, 0, demand[i + 1], demand, pattern, room, min_piece)
            } else {
                true
            };
            room[j] += i64::from(left);
            return ok;
        }
        let j = windows[k];
        let pieces_after = (windows.len() - k - 1) as u32;
        let mut y = min_piece;
        while y + pieces_after * min_piece <= left {
            if i64::from(y) <= room[j] {
                room[j] -= i64::from(y);
                let ok = place(i, k + 1, left - y, demand, pattern, room, min_piece);
                room[j] += i64::from(y);
                if ok {
                    return true;
                }
            }
            y += 1;
        }
        false
    }
    if demand.is_empty() {
        return true;
    }
    let mut room: Vec<i64> = capacity.iter().map(|&c| i64::from(c)).collect();
    place(0, 0, demand[0], demand, pattern, &mut room, min_piece)
}

/// All non-empty subsets of `0..m` with at most `max_size` members.
pub fn window_sets(m: usize, max_size: usize) -> Vec<Vec<usize>> {
    (1u32..(1 << m))
        .filter(|mask| mask.count_ones() as usize <= max_size)
        .map(|mask| (0..m).filter(|&j| mask >> j & 1 == 1).collect())
        .collect()
}
