//! File formats, threads and solver subprocesses around [`curing_core`].
//!
//! The binary in `main.rs` is a thin wrapper over [`cli::run`].

pub mod adapter;
pub mod bench;
pub mod cli;
pub mod io;
pub mod runner;

use std::time::Instant;

use curing_core::Clock;

/// Wall clock started at construction.
#[derive(Debug, Clone, Copy)]
pub struct Stopwatch(Instant);

impl Stopwatch {
    pub fn start() -> Self {
        Stopwatch(Instant::now())
    }
}

impl Default for Stopwatch {
    fn default() -> Self {
        Stopwatch::start()
    }
}

impl Clock for Stopwatch {
    fn elapsed_secs(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}
