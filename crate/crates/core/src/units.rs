//! Integer microsecond durations.
//!
//! Search and feasibility code works on whole microseconds so that residual
//! capacities and fragment sums are exact. Values are converted back to
//! seconds only when a [`Solution`](crate::model::Solution) is assembled.

use core::ops::{Add, AddAssign, Sub, SubAssign};

/// A duration or instant in whole microseconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Micros(pub i64);

const PER_SEC: f64 = 1e6;

impl Micros {
    pub const ZERO: Micros = Micros(0);

    /// Nearest microsecond.
    pub fn from_secs(secs: f64) -> Self {
        Micros(libm::round(secs * PER_SEC) as i64)
    }

    /// Largest microsecond count not above `secs` (up to rounding noise below 1e-3 µs).
    pub fn floor_secs(secs: f64) -> Self {
        Micros(libm::floor(secs * PER_SEC + 1e-3) as i64)
    }

    /// Smallest microsecond count not below `secs` (up to rounding noise below 1e-3 µs).
    pub fn ceil_secs(secs: f64) -> Self {
        Micros(libm::ceil(secs * PER_SEC - 1e-3) as i64)
    }

    pub fn as_secs(self) -> f64 {
        self.0 as f64 / PER_SEC
    }

    pub fn min(self, other: Micros) -> Micros {
        Micros(self.0.min(other.0))
    }

    pub fn max(self, other: Micros) -> Micros {
        Micros(self.0.max(other.0))
    }
}

impl Add for Micros {
    type Output = Micros;
    fn add(self, rhs: Micros) -> Micros {
        Micros(self.0 + rhs.0)
    }
}

impl Sub for Micros {
    type Output = Micros;
    fn sub(self, rhs: Micros) -> Micros {
        Micros(self.0 - rhs.0)
    }
}

impl AddAssign for Micros {
    fn add_assign(&mut self, rhs: Micros) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Micros {
    fn sub_assign(&mut self, rhs: Micros) {
        self.0 -= rhs.0;
    }
}

impl core::iter::Sum for Micros {
    fn sum<I: Iterator<Item = Micros>>(iter: I) -> Micros {
        iter.fold(Micros::ZERO, Add::add)
    }
}

/// Round seconds to the microsecond grid, returning the `f64` nearest to it.
pub fn snap_secs(secs: f64) -> f64 {
    let snapped = Micros::from_secs(secs).as_secs();
    if snapped == 0.0 {
        0.0
    } else {
        snapped
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_round_trip_on_grid() {
        for us in [0i64, 1, 999_999, 10_000_000, 123_456_789_012] {
            let m = Micros(us);
            assert_eq!(Micros::from_secs(m.as_secs()), m);
            assert_eq!(Micros::floor_secs(m.as_secs()), m);
            assert_eq!(Micros::ceil_secs(m.as_secs()), m);
        }
    }

    #[test]
    fn floor_and_ceil_off_grid() {
        assert_eq!(Micros::floor_secs(1.0000004), Micros(1_000_000));
        assert_eq!(Micros::ceil_secs(1.0000004), Micros(1_000_001));
        assert_eq!(snap_secs(-0.0000001), 0.0);
        assert!(snap_secs(-0.0000001).is_sign_positive());
    }
}
