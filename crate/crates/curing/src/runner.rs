//! Heuristic iterations spread over threads.

use std::thread;

use curing_core::heuristic::{check_admissible, fold_best, run_iteration, HeuristicConfig};
use curing_core::{Error, Instance, PartsMode, Schedule};

/// Same result as [`curing_core::heuristic::run_heuristic`] for any
/// `worker_count`: worker `w` runs iterations `w, w + n, ...` and the partial
/// bests are folded by (makespan, iteration).
pub fn run_heuristic_parallel(
    inst: &Instance,
    cfg: &HeuristicConfig,
    mode: PartsMode,
) -> Result<Schedule, Error> {
    check_admissible(inst)?;
    let total = cfg.total_iterations.max(1);
    let workers = cfg.worker_count.clamp(1, total as usize);

    type Partial = (Option<(u32, Schedule)>, Option<(u32, Error)>);
    let partials: Vec<Partial> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    let mut best = None;
                    let mut first_err = None;
                    for i in (w as u32..total).step_by(workers) {
                        match run_iteration(inst, cfg.seed, i, mode) {
                            Ok(s) => best = fold_best(best, (i, s)),
                            Err(e) => {
                                first_err.get_or_insert((i, e));
                            }
                        }
                    }
                    (best, first_err)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("heuristic worker panicked")).collect()
    });

    let mut best = None;
    let mut first_err: Option<(u32, Error)> = None;
    for (b, e) in partials {
        if let Some(b) = b {
            best = fold_best(best, b);
        }
        if let Some(e) = e {
            if first_err.as_ref().is_none_or(|f| e.0 < f.0) {
                first_err = Some(e);
            }
        }
    }
    best.map(|(_, s)| s)
        .ok_or_else(|| first_err.map_or(Error::Infeasible, |(_, e)| e))
}

/// Logical CPUs, or one if unknown.
pub fn default_workers() -> usize {
    thread::available_parallelism().map_or(1, usize::from)
}

#[cfg(test)]
mod tests {
    use super::*;
    use curing_core::domain::fixtures;
    use curing_core::heuristic::run_heuristic;

    #[test]
    fn matches_sequential_run() {
        let inst = fixtures::toy1_two_heaters();
        for workers in [1, 2, 3, 8] {
            let cfg = HeuristicConfig { total_iterations: 25, seed: 5, worker_count: workers };
            assert_eq!(
                run_heuristic_parallel(&inst, &cfg, PartsMode::PerHeater).unwrap(),
                run_heuristic(&inst, &cfg, PartsMode::PerHeater).unwrap()
            );
        }
    }

    #[test]
    fn more_workers_than_iterations() {
        let cfg = HeuristicConfig { total_iterations: 2, seed: 0, worker_count: 16 };
        let s = run_heuristic_parallel(&fixtures::toy1(), &cfg, PartsMode::PerHeater).unwrap();
        assert_eq!(s.makespan(), 2);
    }
}
