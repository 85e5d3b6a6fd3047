use alloc::vec;
use alloc::vec::Vec;

use crate::model::Mode;
use crate::units::Micros;

/// Fragments `(window index, amount)` for one data.
pub type Fragments = Vec<(usize, Micros)>;

/// Place `demand` into windows visited in `window_order`, or fail.
///
/// Segmented mode fills greedily: each window takes as much as it can, except
/// that it leaves at least `ld` behind whenever it would otherwise strand a
/// tail shorter than `ld`; pieces shorter than `ld` are never placed. The data
/// fails unless it fits completely. Unsegmented mode needs one window that
/// holds the whole demand.
///
/// `residuals` is indexed by window index and is not modified.
pub fn allocate_data(
    demand: Micros,
    window_order: &[usize],
    residuals: &[Micros],
    min_segment: Micros,
    mode: Mode,
) -> Option<Fragments> {
    if demand < min_segment || demand <= Micros::ZERO {
        return None;
    }
    match mode {
        Mode::Unsegmented => {
            window_order.iter().find(|&&j| residuals[j] >= demand).map(|&j| vec![(j, demand)])
        }
        Mode::Segmented => {
            let mut remaining = demand;
            let mut out = Vec::new();
            for &j in window_order {
                if remaining == Micros::ZERO {
                    break;
                }
                let mut take = remaining.min(residuals[j]);
                let tail = remaining - take;
                if tail > Micros::ZERO && tail < min_segment {
                    take = remaining - min_segment;
                }
                if take < min_segment {
                    continue;
                }
                out.push((j, take));
                remaining -= take;
            }
            (remaining == Micros::ZERO).then_some(out)
        }
    }
}
