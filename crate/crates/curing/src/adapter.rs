//! Subprocess adapter for external MILP solvers.
//!
//! The solver is called as `<command> [args..] <model.lp> <out.sol>` and must
//! write one `name value` pair per line, plus an optional `objective <v>`
//! line and an optional `status optimal|feasible` line. Exit code 0 means
//! solved, 10 means infeasible; anything else is a failure. The time limit
//! in seconds is passed in the `CURING_TIME_LIMIT` environment variable and
//! enforced by killing the process.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use curing_core::exact::{Method, SolveReport, Status};
use curing_core::hop::{InternalExact, MilpSolver};
use curing_core::milp::{emit_lp, extract_schedule, Assignment, MilpModel, Var};
use curing_core::{Clock, Error, Instance, Schedule};

pub const INFEASIBLE_EXIT: i32 = 10;
const INTEGRALITY_TOL: f64 = 1e-6;

#[derive(Debug, thiserror::Error)]
pub enum AdapterError {
    #[error("solver `{command}` is not available: {source}")]
    AdapterUnavailable { command: String, source: io::Error },
    #[error("{}:{line}: {msg}", path.display())]
    SolutionParseError { path: PathBuf, line: usize, msg: String },
    #[error("solver exited with {0}")]
    Failed(String),
    #[error("solver exceeded its time limit of {0} s")]
    Timeout(f64),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("solution rejected: {0}")]
    Rejected(#[from] Error),
}

/// Parsed solution file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolutionFile {
    pub objective: Option<f64>,
    pub status: Option<Status>,
    pub values: BTreeMap<String, i64>,
}

/// Reads `name value` lines. Blank lines and lines starting with `#` are
/// skipped; values must be integral within a small tolerance.
pub fn parse_solution(text: &str, path: &Path) -> Result<SolutionFile, AdapterError> {
    let mut out = SolutionFile::default();
    for (n, raw) in text.lines().enumerate() {
        let err = |msg: String| AdapterError::SolutionParseError { path: path.to_path_buf(), line: n + 1, msg };
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(name), Some(value), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(err(format!("expected `name value`, got `{line}`")));
        };
        if name == "status" {
            out.status = Some(match value {
                "optimal" => Status::Optimal,
                "feasible" => Status::Feasible,
                other => return Err(err(format!("unknown status `{other}`"))),
            });
            continue;
        }
        let v: f64 = value.parse().map_err(|_| err(format!("`{value}` is not a number")))?;
        if name == "objective" {
            out.objective = Some(v);
            continue;
        }
        let r = v.round();
        if (v - r).abs() > INTEGRALITY_TOL {
            return Err(err(format!("{name} = {v} is not integral")));
        }
        if out.values.insert(name.to_string(), r as i64).is_some() {
            return Err(err(format!("{name} given twice")));
        }
    }
    Ok(out)
}

/// Turns named values into an assignment; zero entries are dropped.
pub fn to_assignment(sol: &SolutionFile) -> Result<Assignment, AdapterError> {
    let mut a = Assignment::new();
    for (name, &v) in &sol.values {
        let var = Var::parse(name).ok_or_else(|| AdapterError::Rejected(Error::UnknownVariable(name.clone())))?;
        if v != 0 {
            a.insert(var, v);
        }
    }
    Ok(a)
}

#[derive(Debug, Clone)]
pub struct ExternalAdapter {
    pub command: String,
    /// Passed before the two file arguments.
    pub args: Vec<String>,
}

impl ExternalAdapter {
    pub fn new(command: impl Into<String>) -> Self {
        ExternalAdapter { command: command.into(), args: Vec::new() }
    }

    /// Writes the model, runs the solver and decodes its answer. The decoded
    /// schedule has passed every model row.
    pub fn run(&self, inst: &Instance, model: &MilpModel, time_limit_seconds: f64) -> Result<SolveReport, AdapterError> {
        let started = Instant::now();
        let dir = tempfile::tempdir()?;
        let lp = dir.path().join("model.lp");
        let sol = dir.path().join("out.sol");
        fs::write(&lp, emit_lp(model))?;

        let mut child = Command::new(&self.command)
            .args(&self.args)
            .arg(&lp)
            .arg(&sol)
            .env("CURING_TIME_LIMIT", format!("{time_limit_seconds}"))
            .stdin(Stdio::null())
            .stdout(Stdio::null())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|source| AdapterError::AdapterUnavailable { command: self.command.clone(), source })?;

        let limit = Duration::from_secs_f64(time_limit_seconds.max(0.0));
        let status = loop {
            if let Some(status) = child.try_wait()? {
                break status;
            }
            if started.elapsed() > limit {
                let _ = child.kill();
                let _ = child.wait();
                return Err(AdapterError::Timeout(time_limit_seconds));
            }
            thread::sleep(Duration::from_millis(5));
        };

        let mut report = SolveReport::empty(Method::Milp, model.thb);
        match status.code() {
            Some(0) => {}
            Some(INFEASIBLE_EXIT) => {
                report.status = Status::Infeasible;
                report.wall_seconds = started.elapsed().as_secs_f64();
                return Ok(report);
            }
            Some(code) => return Err(AdapterError::Failed(format!("exit code {code}"))),
            None => return Err(AdapterError::Failed("a signal".into())),
        }

        let text = fs::read_to_string(&sol)?;
        let parsed = parse_solution(&text, &sol)?;
        let a = to_assignment(&parsed)?;
        let schedule = extract_schedule(inst, model, &a)?;
        let proved = parsed.status.unwrap_or(Status::Optimal) == Status::Optimal;
        report.status = if proved { Status::Optimal } else { Status::Feasible };
        report.makespan = Some(schedule.makespan());
        report.gap_percent = proved.then_some(0.0);
        report.schedule = Some(schedule);
        report.wall_seconds = started.elapsed().as_secs_f64();
        Ok(report)
    }
}

impl MilpSolver for ExternalAdapter {
    fn solve(
        &mut self,
        inst: &Instance,
        model: &MilpModel,
        _incumbent: Option<&Schedule>,
        time_limit_seconds: f64,
    ) -> Result<SolveReport, Error> {
        self.run(inst, model, time_limit_seconds).map_err(|e| Error::Solver(e.to_string()))
    }
}

/// The external solver when it can be started, the built-in search
/// otherwise.
pub struct WithFallback<'a, C: Clock + ?Sized> {
    pub adapter: ExternalAdapter,
    pub internal: InternalExact<'a, C>,
    /// Set once the adapter could not be started.
    pub fell_back: bool,
}

impl<'a, C: Clock + ?Sized> WithFallback<'a, C> {
    pub fn new(adapter: ExternalAdapter, internal: InternalExact<'a, C>) -> Self {
        WithFallback { adapter, internal, fell_back: false }
    }
}

impl<C: Clock + ?Sized> MilpSolver for WithFallback<'_, C> {
    fn solve(
        &mut self,
        inst: &Instance,
        model: &MilpModel,
        incumbent: Option<&Schedule>,
        time_limit_seconds: f64,
    ) -> Result<SolveReport, Error> {
        if !self.fell_back {
            match self.adapter.run(inst, model, time_limit_seconds) {
                Err(AdapterError::AdapterUnavailable { .. }) => self.fell_back = true,
                other => return other.map_err(|e| Error::Solver(e.to_string())),
            }
        }
        self.internal.solve(inst, model, incumbent, time_limit_seconds)
    }
}
