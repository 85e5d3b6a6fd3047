//! Seeded random scenarios.
//!
//! Sampling rules per element:
//!
//! | element | rule |
//! |---------|------|
//! | `p_i`   | integer uniform on `[1, 10]` |
//! | `os_i`  | `0` for the first data, else `oe_{i-1} + max(0, N(gap_mean, gap_std))` |
//! | `d_i`   | uniform on `[2 ld, 10 ld]` |
//! | `oe_i`  | `os_i + d_i / 4.5` |
//! | `ds_j`  | `oe_{ceil(N/4)} + gap` for the first window, else `de_{j-1} + gap` |
//! | `l_j`   | uniform on `[ld, 5 ld]` |
//! | `de_j`  | `ds_j + l_j` |
//!
//! `N = round(a * M)` with `a` uniform on `[a_low, a_high]`, unless an exact
//! data count is given.
//!
//! All times land on the microsecond grid. Observation lengths are multiples
//! of 2 µs, so `d = 4.5 * od` is a whole number of microseconds too and
//! scenarios survive a round trip through 6-decimal text unchanged.
//!
//! The generator is xoshiro256++ seeded through SplitMix64
//! (`seed_from_u64`); normals use the Box–Muller transform.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::ModelError;
use crate::model::{ImagingData, PlaybackWindow, Scenario};
use crate::units::Micros;

/// Standard benchmark scenario shapes `(N, M)`.
pub const TABLE_PRESETS: [(usize, usize); 8] =
    [(20, 8), (30, 15), (50, 24), (100, 70), (200, 85), (500, 220), (800, 340), (1000, 530)];

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    /// Number of playback windows (M).
    pub windows: usize,
    /// Minimum segment length `ld` in seconds.
    pub min_segment: f64,
    pub seed: u64,
    pub gap_mean: f64,
    pub gap_std: f64,
    pub a_low: f64,
    pub a_high: f64,
    /// Pin N instead of sampling it from `a * M`.
    pub data_count: Option<usize>,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            windows: 8,
            min_segment: 10.0,
            seed: 0,
            gap_mean: 100.0,
            gap_std: 1.0,
            a_low: 1.5,
            a_high: 2.5,
            data_count: None,
        }
    }
}

impl GenParams {
    pub fn new(windows: usize, seed: u64) -> Self {
        GenParams { windows, seed, ..GenParams::default() }
    }

    /// Exact `(N, M)` shape.
    pub fn shape(data: usize, windows: usize, seed: u64) -> Self {
        GenParams { windows, seed, data_count: Some(data), ..GenParams::default() }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let param = |name, reason: &str| ModelError::Parameter { name, reason: reason.into() };
        if self.windows < 1 {
            return Err(param("windows", "at least one window is required"));
        }
        if !(self.min_segment.is_finite() && self.min_segment >= 1e-6) {
            return Err(param("ld", "must be a finite number of at least 1e-6 s"));
        }
        if !(self.gap_mean.is_finite() && self.gap_std.is_finite() && self.gap_std >= 0.0) {
            return Err(param("gap", "mean must be finite and std non-negative"));
        }
        if !(self.a_low.is_finite() && self.a_high.is_finite() && self.a_low > 0.0) {
            return Err(param("a", "bounds must be finite and positive"));
        }
        if self.a_low > self.a_high {
            return Err(param("a", "a_low must not exceed a_high"));
        }
        Ok(())
    }
}

/// Standard normal via Box–Muller (cosine branch).
fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    // (0, 1] keeps the logarithm finite
    let u1 = 1.0 - rng.random::<f64>();
    let u2 = rng.random::<f64>();
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * core::f64::consts::PI * u2)
}

fn gap<R: Rng>(rng: &mut R, p: &GenParams) -> Micros {
    let sample = p.gap_mean + p.gap_std * standard_normal(rng);
    Micros::from_secs(sample.max(0.0))
}

fn uniform_micros<R: Rng>(rng: &mut R, lo: Micros, hi: Micros) -> Micros {
    let v = rng.random_range(lo.as_secs()..=hi.as_secs());
    Micros::from_secs(v).max(lo).min(hi)
}

pub fn generate_scenario(params: &GenParams) -> Result<Scenario, ModelError> {
    params.validate()?;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(params.seed);
    let m = params.windows;
    let ld = Micros::from_secs(params.min_segment);

    let n = match params.data_count {
        Some(n) => n,
        None => {
            let a = if params.a_low < params.a_high {
                rng.random_range(params.a_low..params.a_high)
            } else {
                params.a_low
            };
            let lo = libm::ceil(params.a_low * m as f64) as usize;
            let hi = libm::floor(params.a_high * m as f64) as usize;
            (libm::round(a * m as f64) as usize).clamp(lo, hi.max(lo))
        }
    };

    // observation length in units of 2 µs; playback = 9 µs per unit
    let od_lo = (2 * ld.0 + 8) / 9;
    let od_hi = (10 * ld.0) / 9;
    let mut data = Vec::with_capacity(n);
    let mut prev_end = Micros::ZERO;
    for i in 0..n {
        let priority = rng.random_range(1..=10u32);
        let start = if i == 0 { Micros::ZERO } else { prev_end + gap(&mut rng, params) };
        let d = rng.random_range((2.0 * params.min_segment)..=(10.0 * params.min_segment));
        let units = (libm::round(d * 1e6 / 9.0) as i64).clamp(od_lo, od_hi);
        let end = start + Micros(2 * units);
        data.push(ImagingData {
            id: i as u32 + 1,
            priority,
            obs_start: start.as_secs(),
            obs_end: end.as_secs(),
            duration: Micros(9 * units).as_secs(),
        });
        prev_end = end;
    }

    let anchor = if n == 0 { Micros::ZERO } else { Micros::from_secs(data[n.div_ceil(4) - 1].obs_end) };
    let mut windows = Vec::with_capacity(m);
    let mut prev_end = anchor;
    for j in 0..m {
        let start = prev_end + gap(&mut rng, params);
        let length = uniform_micros(&mut rng, ld, Micros(5 * ld.0));
        let end = start + length;
        windows.push(PlaybackWindow {
            id: j as u32 + 1,
            start: start.as_secs(),
            end: end.as_secs(),
            length: length.as_secs(),
        });
        prev_end = end;
    }

    Scenario::new(ld.as_secs(), data, windows)
}
