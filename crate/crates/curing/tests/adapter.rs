//! The external adapter against shell scripts that stand in for a solver.

use std::fs;
use std::os::unix::fs::PermissionsExt;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use curing::adapter::{AdapterError, ExternalAdapter, WithFallback};
use curing_core::domain::{fixtures, PartsMode};
use curing_core::exact::{solve_exact, SearchLimits, Status};
use curing_core::hop::{InternalExact, MilpSolver};
use curing_core::milp::{build_model, encode_schedule, MilpModel};
use curing_core::{Instance, NoClock};

mod common;
use common::{bin, fixture};

const MODE: PartsMode = PartsMode::PerHeater;

fn toy1() -> (Instance, MilpModel) {
    let inst = Instance::new(fixtures::toy1_spec()).unwrap();
    let model = build_model(&inst, 2, MODE);
    (inst, model)
}

/// Solution file text for the one-period TOY1 optimum.
fn toy1_solution(extra: &str) -> String {
    let (inst, model) = toy1();
    let r = solve_exact(&inst, 2, MODE, &SearchLimits::default(), None, &NoClock);
    let a = encode_schedule(&inst, &model, r.schedule.as_ref().unwrap()).unwrap();
    let mut text = String::from("objective 1\n");
    text.push_str(extra);
    for (v, x) in &a {
        text.push_str(&format!("{v} {x}\n"));
    }
    text
}

fn script(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, format!("#!/bin/sh\n{body}\n")).unwrap();
    fs::set_permissions(&path, fs::Permissions::from_mode(0o755)).unwrap();
    path
}

/// A solver that checks its input and writes `solution`.
fn writes(dir: &Path, name: &str, solution: &str) -> ExternalAdapter {
    let body = format!(
        "grep -q '^Subject To' \"$1\" || exit 4\n[ -n \"$CURING_TIME_LIMIT\" ] || exit 5\ncat > \"$2\" <<'SOL'\n{solution}SOL"
    );
    ExternalAdapter::new(script(dir, name, &body).to_string_lossy())
}

#[test]
fn optimal_solution_is_decoded() {
    let dir = tempfile::tempdir().unwrap();
    let (inst, model) = toy1();
    let r = writes(dir.path(), "opt.sh", &toy1_solution("")).run(&inst, &model, 30.0).unwrap();
    assert_eq!(r.status, Status::Optimal);
    assert_eq!(r.makespan, Some(1));
    assert_eq!(r.gap_percent, Some(0.0));
    assert!(curing_core::validate_schedule(&inst, r.schedule.as_ref().unwrap(), MODE).is_feasible());
}

#[test]
fn feasible_status_is_kept() {
    let dir = tempfile::tempdir().unwrap();
    let (inst, model) = toy1();
    let sol = toy1_solution("status feasible\n");
    let r = writes(dir.path(), "feas.sh", &sol).run(&inst, &model, 30.0).unwrap();
    assert_eq!(r.status, Status::Feasible);
    assert_eq!(r.gap_percent, None);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (inst, model) = toy1();
    let infeasible = ExternalAdapter::new(script(dir.path(), "inf.sh", "exit 10").to_string_lossy());
    assert_eq!(infeasible.run(&inst, &model, 30.0).unwrap().status, Status::Infeasible);
    let crash = ExternalAdapter::new(script(dir.path(), "crash.sh", "exit 3").to_string_lossy());
    assert!(matches!(crash.run(&inst, &model, 30.0), Err(AdapterError::Failed(_))));
}

#[test]
fn bad_solutions_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let (inst, model) = toy1();
    let garbage = writes(dir.path(), "garbage.sh", "objective 1\nw_1\n");
    match garbage.run(&inst, &model, 30.0) {
        Err(AdapterError::SolutionParseError { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
    // claims one period but produces nothing
    let empty = writes(dir.path(), "empty.sh", "objective 1\nw_1 1\n");
    assert!(matches!(empty.run(&inst, &model, 30.0), Err(AdapterError::Rejected(_))));
    let unknown = writes(dir.path(), "unknown.sh", "objective 0\nq_1 1\n");
    assert!(matches!(unknown.run(&inst, &model, 30.0), Err(AdapterError::Rejected(_))));
}

#[test]
fn slow_solver_is_killed() {
    let dir = tempfile::tempdir().unwrap();
    let (inst, model) = toy1();
    let slow = ExternalAdapter::new(script(dir.path(), "slow.sh", "exec sleep 30").to_string_lossy());
    let started = Instant::now();
    assert!(matches!(slow.run(&inst, &model, 0.3), Err(AdapterError::Timeout(_))));
    assert!(started.elapsed().as_secs_f64() < 10.0);
}

#[test]
fn missing_solver_falls_back() {
    let (inst, model) = toy1();
    let missing = ExternalAdapter::new("/nonexistent/solver");
    assert!(matches!(missing.run(&inst, &model, 1.0), Err(AdapterError::AdapterUnavailable { .. })));
    let mut solver = WithFallback::new(missing, InternalExact::new(SearchLimits::default(), &NoClock));
    let r = solver.solve(&inst, &model, None, 30.0).unwrap();
    assert!(solver.fell_back);
    assert_eq!((r.status, r.makespan), (Status::Optimal, Some(1)));
}

fn cli_milp(cmd: &Path) -> (Option<i32>, String) {
    let o = Command::new(bin())
        .args(["solve", "--mode", "milp", "--no-timings", "--instance"])
        .arg(fixture("toy1.json"))
        .arg("--solver-cmd")
        .arg(cmd)
        .output()
        .unwrap();
    (o.status.code(), String::from_utf8_lossy(&o.stdout).into_owned())
}

#[test]
fn cli_uses_the_solver_command() {
    let dir = tempfile::tempdir().unwrap();
    let opt = writes(dir.path(), "opt.sh", &toy1_solution(""));
    let (code, out) = cli_milp(Path::new(&opt.command));
    assert_eq!(code, Some(0), "{out}");
    assert!(out.contains("status optimal\n") && out.contains("makespan 1\n"), "{out}");

    let feas = writes(dir.path(), "feas.sh", &toy1_solution("status feasible\n"));
    let (code, out) = cli_milp(Path::new(&feas.command));
    assert_eq!(code, Some(3), "{out}");
    assert!(out.contains("status feasible\n"), "{out}");

    let inf = script(dir.path(), "inf.sh", "exit 10");
    assert_eq!(cli_milp(&inf).0, Some(1));
}
