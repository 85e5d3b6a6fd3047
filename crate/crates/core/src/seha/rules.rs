//! Heuristic scores that drive construction order.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::model::{Scenario, ServiceMatrix};
use crate::units::Micros;

/// Priority per playback second, normalised so the best data scores 1.
pub fn contribution_rates(scenario: &Scenario) -> Vec<f64> {
    let raw: Vec<f64> = scenario.data().iter().map(|t| f64::from(t.priority) / t.duration).collect();
    let best = raw.iter().copied().fold(0.0_f64, f64::max);
    raw.into_iter().map(|r| r / best).collect()
}

/// How many data each window can serve (column sums of the service matrix).
pub fn window_service_coefficients(matrix: &ServiceMatrix) -> Vec<u32> {
    matrix.column_sums()
}

/// Data indices by decreasing contribution rate, ties by ascending identity.
///
/// Compares `p_i / d_i` exactly by cross-multiplying integer microseconds, so
/// the order does not depend on floating-point normalisation.
pub fn contribution_order(scenario: &Scenario) -> Vec<usize> {
    let data = scenario.data();
    let demand: Vec<i128> = data.iter().map(|t| i128::from(Micros::from_secs(t.duration).0)).collect();
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.sort_by(|&a, &b| {
        let lhs = i128::from(data[a].priority) * demand[b];
        let rhs = i128::from(data[b].priority) * demand[a];
        rhs.cmp(&lhs).then(data[a].id.cmp(&data[b].id)).then(a.cmp(&b))
    });
    order
}

/// Window indices by increasing service coefficient, ties by ascending identity.
pub fn service_order(scenario: &Scenario, coefficients: &[u32]) -> Vec<usize> {
    let windows = scenario.windows();
    let mut order: Vec<usize> = (0..windows.len()).collect();
    order.sort_by(|&a, &b| match coefficients[a].cmp(&coefficients[b]) {
        Ordering::Equal => windows[a].id.cmp(&windows[b].id).then(a.cmp(&b)),
        other => other,
    });
    order
}
