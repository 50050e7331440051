//! Hybrid procedure: the heuristic makespan becomes the horizon of the
//! mixed-integer model, which is then solved and compared with the
//! heuristic schedule.

use crate::domain::{validate_schedule, Instance, PartsMode, Schedule};
use crate::error::Error;
use crate::exact::{demand_lower_bound, solve_exact, Method, SearchLimits, SolveReport, Status};
use crate::heuristic::{run_heuristic, HeuristicConfig};
use crate::milp::{build_model, model_stats, MilpModel};
use crate::thb::compute_thb;
use crate::Clock;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverChoice {
    #[default]
    InternalExact,
    ExternalAdapter,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopConfig {
    pub heuristic: HeuristicConfig,
    pub solver: SolverChoice,
    pub time_limit_seconds: f64,
    pub parts_mode: PartsMode,
}

impl Default for HopConfig {
    fn default() -> Self {
        HopConfig {
            heuristic: HeuristicConfig::default(),
            solver: SolverChoice::InternalExact,
            time_limit_seconds: 3600.0,
            parts_mode: PartsMode::PerHeater,
        }
    }
}

/// Anything that can minimize a built model.
///
/// `incumbent` is a schedule known to fit the model's horizon; solvers may
/// ignore it. A returned schedule must come with `makespan`.
pub trait MilpSolver {
    fn solve(
        &mut self,
        inst: &Instance,
        model: &MilpModel,
        incumbent: Option<&Schedule>,
        time_limit_seconds: f64,
    ) -> Result<SolveReport, Error>;
}

/// The built-in branch-and-bound. It searches the same feasible set as the
/// model, so it only reads the model's horizon and parts mode.
pub struct InternalExact<'a, C: Clock + ?Sized> {
    pub limits: SearchLimits,
    pub clock: &'a C,
}

impl<'a, C: Clock + ?Sized> InternalExact<'a, C> {
    pub fn new(limits: SearchLimits, clock: &'a C) -> Self {
        InternalExact { limits, clock }
    }
}

impl<C: Clock + ?Sized> MilpSolver for InternalExact<'_, C> {
    fn solve(
        &mut self,
        inst: &Instance,
        model: &MilpModel,
        incumbent: Option<&Schedule>,
        time_limit_seconds: f64,
    ) -> Result<SolveReport, Error> {
        let mut limits = self.limits;
        limits.time_limit_seconds =
            self.clock.elapsed_secs() + time_limit_seconds.min(limits.time_limit_seconds);
        Ok(solve_exact(inst, model.thb, model.parts_mode, &limits, incumbent, self.clock))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HopOutcome {
    /// Combined report; `wall_seconds` sums both phases.
    pub report: SolveReport,
    pub schedule: Schedule,
    pub heuristic_makespan: u32,
    pub heuristic_seconds: f64,
    pub solver_seconds: f64,
    /// `None` when the solver was not needed or failed.
    pub solver_status: Option<Status>,
}

fn check(inst: &Instance, s: &Schedule, mode: PartsMode) -> Result<(), Error> {
    let report = validate_schedule(inst, s, mode);
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(Error::Solver(alloc::format!("solver schedule rejected: {v}"))),
    }
}

/// Gap of a schedule against the demand bound.
fn bound_gap(inst: &Instance, makespan: u32) -> f64 {
    if makespan == 0 {
        return 0.0;
    }
    let lb = demand_lower_bound(inst).min(makespan);
    100.0 * (makespan - lb) as f64 / makespan as f64
}

/// Second phase of the procedure, starting from an already computed
/// heuristic schedule. A solver error is not fatal: the heuristic schedule is
/// returned with a bound-based gap.
pub fn run_hop_from<C: Clock + ?Sized>(
    inst: &Instance,
    cfg: &HopConfig,
    solver: &mut dyn MilpSolver,
    heuristic: Schedule,
    heuristic_seconds: f64,
    clock: &C,
) -> Result<HopOutcome, Error> {
    let thb = heuristic.makespan();
    let model = build_model(inst, thb, cfg.parts_mode);
    let mut report = SolveReport::empty(Method::Hop, thb);
    report.stats = Some(model_stats(&model));
    let mut outcome = HopOutcome {
        report: report.clone(),
        schedule: heuristic.clone(),
        heuristic_makespan: thb,
        heuristic_seconds,
        solver_seconds: 0.0,
        solver_status: None,
    };

    let mut best = heuristic;
    let mut proved = thb == 0;
    if thb > 0 {
        let started = clock.elapsed_secs();
        let solved = solver.solve(inst, &model, Some(&best), cfg.time_limit_seconds);
        outcome.solver_seconds = clock.elapsed_secs() - started;
        if let Ok(r) = solved {
            outcome.solver_status = Some(r.status);
            if let Some(s) = r.schedule {
                check(inst, &s, cfg.parts_mode)?;
                if s.makespan() < best.makespan() {
                    best = s;
                }
            }
            proved = r.status == Status::Optimal;
        }
    }

    report.makespan = Some(best.makespan());
    report.status = if proved { Status::Optimal } else { Status::Feasible };
    report.gap_percent = Some(if proved { 0.0 } else { bound_gap(inst, best.makespan()) });
    report.wall_seconds = outcome.heuristic_seconds + outcome.solver_seconds;
    report.schedule = Some(best.clone());
    outcome.report = report;
    outcome.schedule = best;
    Ok(outcome)
}

/// Heuristic, then the model at the heuristic makespan.
pub fn run_hop<C: Clock + ?Sized>(
    inst: &Instance,
    cfg: &HopConfig,
    solver: &mut dyn MilpSolver,
    clock: &C,
) -> Result<HopOutcome, Error> {
    let started = clock.elapsed_secs();
    let heuristic = run_heuristic(inst, &cfg.heuristic, cfg.parts_mode)?;
    let seconds = clock.elapsed_secs() - started;
    run_hop_from(inst, cfg, solver, heuristic, seconds, clock)
}

/// The model at the closed-form horizon, solved without any heuristic help.
pub fn run_baseline_milp<C: Clock + ?Sized>(
    inst: &Instance,
    cfg: &HopConfig,
    solver: &mut dyn MilpSolver,
    clock: &C,
) -> Result<SolveReport, Error> {
    crate::heuristic::check_admissible(inst)?;
    let thb = compute_thb(inst)?;
    let model = build_model(inst, thb, cfg.parts_mode);
    let started = clock.elapsed_secs();
    let mut report = solver.solve(inst, &model, None, cfg.time_limit_seconds)?;
    report.mode = Method::Milp;
    report.thb = thb;
    report.stats = Some(model_stats(&model));
    report.wall_seconds = clock.elapsed_secs() - started;
    if let Some(s) = &report.schedule {
        check(inst, s, cfg.parts_mode)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::fixtures;
    use crate::NoClock;

    fn internal() -> InternalExact<'static, NoClock> {
        InternalExact::new(SearchLimits::default(), &NoClock)
    }

    #[test]
    fn toy1_improves_on_the_heuristic() {
        let inst = fixtures::toy1();
        let out = run_hop(&inst, &HopConfig::default(), &mut internal(), &NoClock).unwrap();
        assert_eq!(out.heuristic_makespan, 2);
        assert_eq!(out.report.thb, 2);
        assert_eq!(out.schedule.makespan(), 1);
        assert_eq!(out.report.status, Status::Optimal);
        assert!(validate_schedule(&inst, &out.schedule, PartsMode::PerHeater).is_feasible());
    }

    #[test]
    fn toy2_confirms_the_heuristic() {
        let inst = fixtures::toy2();
        let out = run_hop(&inst, &HopConfig::default(), &mut internal(), &NoClock).unwrap();
        assert_eq!((out.heuristic_makespan, out.schedule.makespan()), (2, 2));
        assert_eq!(out.report.gap_percent, Some(0.0));
    }

    #[test]
    fn zero_demand_needs_no_solver() {
        struct Panics;
        impl MilpSolver for Panics {
            fn solve(&mut self, _: &Instance, _: &MilpModel, _: Option<&Schedule>, _: f64) -> Result<SolveReport, Error> {
                panic!("solver called")
            }
        }
        let out = run_hop(&fixtures::zero_demand(), &HopConfig::default(), &mut Panics, &NoClock).unwrap();
        assert_eq!(out.schedule.makespan(), 0);
        assert_eq!(out.report.status, Status::Optimal);
    }

    #[test]
    fn failing_solver_falls_back_to_heuristic() {
        struct Fails;
        impl MilpSolver for Fails {
            fn solve(&mut self, _: &Instance, _: &MilpModel, _: Option<&Schedule>, _: f64) -> Result<SolveReport, Error> {
                Err(Error::Solver("unavailable".into()))
            }
        }
        let out = run_hop(&fixtures::toy1(), &HopConfig::default(), &mut Fails, &NoClock).unwrap();
        assert_eq!(out.schedule.makespan(), 2);
        assert_eq!(out.report.status, Status::Feasible);
        assert_eq!(out.report.gap_percent, Some(50.0));
    }

    #[test]
    fn baseline_uses_closed_form_horizon() {
        for (inst, opt) in [(fixtures::toy1(), 1), (fixtures::toy2(), 2)] {
            let r = run_baseline_milp(&inst, &HopConfig::default(), &mut internal(), &NoClock).unwrap();
            assert_eq!((r.thb, r.makespan, r.status), (2, Some(opt), Status::Optimal));
        }
        let r = run_baseline_milp(&fixtures::zero_demand(), &HopConfig::default(), &mut internal(), &NoClock)
            .unwrap();
        assert_eq!(r.makespan, Some(0));
    }
}
