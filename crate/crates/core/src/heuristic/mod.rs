//! Randomized multi-start heuristic.
//!
//! Each iteration draws random mold pairs until demand is covered, places
//! the batches greedily on heaters and then splits and reassigns them while
//! the makespan keeps dropping. The best schedule over all iterations wins.

mod assignment;
mod improvement;
mod pairing;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::domain::{validate_instance, Instance, PartsMode, Schedule};
use crate::error::Error;

pub use assignment::assignment_procedure;
pub use improvement::{improvement_procedure, try_reduce_production};
pub use pairing::{batch_size, mold_pairs_procedure, PartialSolution, PendingTuple};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeuristicConfig {
    pub total_iterations: u32,
    pub seed: u64,
    /// Threads used by runners that parallelize iterations; results do not
    /// depend on it.
    pub worker_count: usize,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        HeuristicConfig { total_iterations: 100, seed: 0, worker_count: 1 }
    }
}

/// Random stream of one iteration.
pub fn iteration_rng(seed: u64, iteration: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(iteration as u64);
    rng
}

/// One constructive pass plus improvement.
pub fn run_iteration(
    inst: &Instance,
    seed: u64,
    iteration: u32,
    mode: PartsMode,
) -> Result<Schedule, Error> {
    let mut rng = iteration_rng(seed, iteration);
    let partial = mold_pairs_procedure(inst, &mut rng)?;
    let s = assignment_procedure(inst, &partial, mode)?;
    improvement_procedure(inst, &s, mode)
}

/// Keeps the lower makespan; on ties the lower iteration index.
pub fn fold_best(
    best: Option<(u32, Schedule)>,
    next: (u32, Schedule),
) -> Option<(u32, Schedule)> {
    match best {
        Some(b) if (b.1.makespan(), b.0) <= (next.1.makespan(), next.0) => Some(b),
        _ => Some(next),
    }
}

/// Rejects inadmissible instances before any iteration runs.
pub fn check_admissible(inst: &Instance) -> Result<(), Error> {
    let report = validate_instance(inst);
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(Error::Inadmissible(alloc::format!("{v}"))),
    }
}

/// Runs `cfg.total_iterations` iterations in sequence and returns the best
/// schedule. Fails with the first iteration's error if none succeeds.
pub fn run_heuristic(
    inst: &Instance,
    cfg: &HeuristicConfig,
    mode: PartsMode,
) -> Result<Schedule, Error> {
    check_admissible(inst)?;
    let mut best = None;
    let mut first_err = None;
    for i in 0..cfg.total_iterations.max(1) {
        match run_iteration(inst, cfg.seed, i, mode) {
            Ok(s) => best = fold_best(best, (i, s)),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    best.map(|(_, s)| s)
        .ok_or_else(|| first_err.unwrap_or(Error::Infeasible))
}
