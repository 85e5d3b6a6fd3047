//! Host-side companion to `sdsp-core`: canonical JSON files, a monotonic
//! clock, the experiment harness and the `sdsp` command-line tool.

pub mod cli;
pub mod clock;
pub mod experiments;
pub mod formats;

pub use clock::MonotonicClock;
