//! LP-format text of the full mixed-integer model.

use alloc::string::String;
use core::fmt::Write;

use crate::model::{compute_service_matrix, Mode, Scenario};

/// Plain decimal with at most six fractional digits.
fn num(v: f64) -> String {
    let mut s = alloc::format!("{v:.6}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// The model as LP-format text.
///
/// Variables are `x_i`, `g_i_j` and `y_i_j` with 1-based indices; pairs that
/// cannot be served get no `g`/`y` variables at all. Rows are named after the
/// model constraints: `c6lo`/`c6hi` (fragment bounds), `c7` (completeness),
/// `c8` (window capacity), `c10` (selection link) and, in unsegmented mode,
/// `single` (one window per data).
pub fn export_lp(scenario: &Scenario, min_segment: f64, mode: Mode) -> String {
    let r = compute_service_matrix(scenario);
    let (n, m) = (scenario.n(), scenario.m());
    let r = &r;
    let pairs = |i: usize| (0..m).filter(move |&j| r.serves(i, j));
    let mut out = String::new();
    // writes into a String cannot fail
    let w = &mut out;

    let _ = writeln!(
        w,
        "\\ satellite downlink schedule, {} data, {} windows, ld {}, mode {}",
        n,
        m,
        num(min_segment),
        mode
    );
    let _ = writeln!(w, "Maximize");
    let _ = write!(w, " obj:");
    for (i, t) in scenario.data().iter().enumerate() {
        let sep = if i == 0 { "" } else { " +" };
        let _ = write!(w, "{sep} {} x_{}", t.priority, i + 1);
    }
    if n == 0 {
        let _ = write!(w, " 0");
    }
    let _ = writeln!(w);

    let _ = writeln!(w, "Subject To");
    for i in 0..n {
        let d = num(scenario.data()[i].duration);
        for j in pairs(i) {
            let (a, b) = (i + 1, j + 1);
            let _ = writeln!(w, " c6lo_{a}_{b}: {} g_{a}_{b} - y_{a}_{b} <= 0", num(min_segment));
            let _ = writeln!(w, " c6hi_{a}_{b}: y_{a}_{b} - {d} g_{a}_{b} <= 0");
        }
    }
    for i in 0..n {
        let terms: alloc::vec::Vec<String> =
            pairs(i).map(|j| alloc::format!("y_{}_{}", i + 1, j + 1)).collect();
        let lead = if terms.is_empty() { String::new() } else { terms.join(" + ") + " " };
        let d = num(scenario.data()[i].duration);
        let _ = writeln!(w, " c7_{}: {lead}- {d} x_{} = 0", i + 1, i + 1);
    }
    for (j, win) in scenario.windows().iter().enumerate() {
        let terms: alloc::vec::Vec<String> =
            (0..n).filter(|&i| r.serves(i, j)).map(|i| alloc::format!("y_{}_{}", i + 1, j + 1)).collect();
        if terms.is_empty() {
            continue;
        }
        let _ = writeln!(w, " c8_{}: {} <= {}", j + 1, terms.join(" + "), num(win.length));
    }
    for i in 0..n {
        for j in pairs(i) {
            let _ = writeln!(w, " c10_{a}_{b}: g_{a}_{b} - x_{a} <= 0", a = i + 1, b = j + 1);
        }
    }
    if mode == Mode::Unsegmented {
        for i in 0..n {
            let terms: alloc::vec::Vec<String> =
                pairs(i).map(|j| alloc::format!("g_{}_{}", i + 1, j + 1)).collect();
            if !terms.is_empty() {
                let _ = writeln!(w, " single_{}: {} <= 1", i + 1, terms.join(" + "));
            }
        }
    }

    let _ = writeln!(w, "Bounds");
    for i in 0..n {
        for j in pairs(i) {
            let _ = writeln!(w, " y_{}_{} >= 0", i + 1, j + 1);
        }
    }
    let _ = writeln!(w, "Binaries");
    for i in 0..n {
        let _ = writeln!(w, " x_{}", i + 1);
        for j in pairs(i) {
            let _ = writeln!(w, " g_{}_{}", i + 1, j + 1);
        }
    }
    let _ = writeln!(w, "End");
    out
}
