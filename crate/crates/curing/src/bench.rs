//! Running solver modes over instance suites and tabulating the results.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::thread;

use serde::Deserialize;

use curing_core::exact::{demand_lower_bound, solve_exact, Method, SearchLimits, SolveReport, Status};
use curing_core::heuristic::HeuristicConfig;
use curing_core::hop::{run_baseline_milp, run_hop_from, HopConfig, InternalExact, MilpSolver};
use curing_core::thb::compute_thb;
use curing_core::{Clock, Error, Instance, PartsMode};

use crate::adapter::{ExternalAdapter, WithFallback};
use crate::io::{self, IoError};
use crate::runner::run_heuristic_parallel;
use crate::Stopwatch;

pub const CSV_HEADER: [&str; 9] =
    ["instance", "mode", "thb", "makespan", "gap_pct", "time_s", "constraints", "binary_vars", "real_vars"];

/// Settings shared by every mode.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub heuristic: HeuristicConfig,
    pub time_limit_seconds: f64,
    pub parts_mode: PartsMode,
    /// External solver for `milp` and `hop`; the internal search is used
    /// when absent or when the command cannot be started.
    pub solver_cmd: Option<String>,
    pub max_nodes: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            heuristic: HeuristicConfig::default(),
            time_limit_seconds: 60.0,
            parts_mode: PartsMode::PerHeater,
            solver_cmd: None,
            max_nodes: SearchLimits::default().max_nodes,
        }
    }
}

impl RunOptions {
    fn limits(&self) -> SearchLimits {
        SearchLimits { max_nodes: self.max_nodes, time_limit_seconds: self.time_limit_seconds, ..SearchLimits::default() }
    }

    fn hop_config(&self) -> HopConfig {
        HopConfig {
            heuristic: self.heuristic,
            solver: match self.solver_cmd {
                Some(_) => curing_core::hop::SolverChoice::ExternalAdapter,
                None => curing_core::hop::SolverChoice::InternalExact,
            },
            time_limit_seconds: self.time_limit_seconds,
            parts_mode: self.parts_mode,
        }
    }
}

fn bound_gap(inst: &Instance, makespan: u32) -> f64 {
    if makespan == 0 {
        return 0.0;
    }
    let lb = demand_lower_bound(inst).min(makespan);
    100.0 * (makespan - lb) as f64 / makespan as f64
}

/// Runs one mode on one instance. The report always carries the schedule
/// when one was found.
pub fn solve_instance(inst: &Instance, mode: Method, opts: &RunOptions) -> Result<SolveReport, Error> {
    let clock = Stopwatch::start();
    let internal = InternalExact::new(opts.limits(), &clock);
    let mut solver: Box<dyn MilpSolver + '_> = match &opts.solver_cmd {
        Some(cmd) => Box::new(WithFallback::new(ExternalAdapter::new(cmd.clone()), internal)),
        None => Box::new(internal),
    };
    match mode {
        Method::Heuristic => {
            let s = run_heuristic_parallel(inst, &opts.heuristic, opts.parts_mode)?;
            let mut r = SolveReport::empty(Method::Heuristic, compute_thb(inst)?);
            r.status = Status::Feasible;
            r.makespan = Some(s.makespan());
            r.gap_percent = Some(bound_gap(inst, s.makespan()));
            r.schedule = Some(s);
            r.wall_seconds = clock.elapsed_secs();
            Ok(r)
        }
        Method::Exact => {
            curing_core::heuristic::check_admissible(inst)?;
            let thb = compute_thb(inst)?;
            let mut r = solve_exact(inst, thb, opts.parts_mode, &opts.limits(), None, &clock);
            r.wall_seconds = clock.elapsed_secs();
            Ok(r)
        }
        Method::Milp => {
            let mut r = run_baseline_milp(inst, &opts.hop_config(), solver.as_mut(), &clock)?;
            r.wall_seconds = clock.elapsed_secs();
            Ok(r)
        }
        Method::Hop => {
            let s = run_heuristic_parallel(inst, &opts.heuristic, opts.parts_mode)?;
            let seconds = clock.elapsed_secs();
            let out = run_hop_from(inst, &opts.hop_config(), solver.as_mut(), s, seconds, &clock)?;
            Ok(out.report)
        }
    }
}

/// One line of a result table. `error` is set when the mode failed; the
/// numeric fields are then empty.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub instance: String,
    pub mode: Method,
    pub thb: Option<u32>,
    pub makespan: Option<u32>,
    pub gap_pct: Option<f64>,
    pub time_s: f64,
    pub constraints: Option<usize>,
    pub binary_vars: Option<usize>,
    pub real_vars: Option<usize>,
    pub status: Option<Status>,
    pub error: Option<String>,
}

impl ResultRow {
    pub fn from_report(instance: &str, r: &SolveReport) -> Self {
        ResultRow {
            instance: instance.to_string(),
            mode: r.mode,
            thb: Some(r.thb),
            makespan: r.makespan,
            gap_pct: r.gap_percent,
            time_s: r.wall_seconds,
            constraints: r.stats.map(|s| s.n_constraints),
            binary_vars: r.stats.map(|s| s.n_binary_vars),
            real_vars: r.stats.map(|s| s.n_integer_vars),
            status: Some(r.status),
            error: None,
        }
    }

    pub fn failed(instance: &str, mode: Method, error: impl Into<String>) -> Self {
        ResultRow {
            instance: instance.to_string(),
            mode,
            thb: None,
            makespan: None,
            gap_pct: None,
            time_s: 0.0,
            constraints: None,
            binary_vars: None,
            real_vars: None,
            status: None,
            error: Some(error.into()),
        }
    }
}

/// Arithmetic mean of each column per mode over the rows that have a value,
/// in order of first appearance.
pub fn averages(rows: &[ResultRow]) -> Vec<AverageRow> {
    let mut modes: Vec<Method> = Vec::new();
    for r in rows {
        if !modes.contains(&r.mode) {
            modes.push(r.mode);
        }
    }
    modes
        .into_iter()
        .map(|mode| {
            let of = |f: &dyn Fn(&ResultRow) -> Option<f64>| mean(rows.iter().filter(|r| r.mode == mode).filter_map(f));
            AverageRow {
                mode,
                thb: of(&|r| r.thb.map(f64::from)),
                makespan: of(&|r| r.makespan.map(f64::from)),
                gap_pct: of(&|r| r.gap_pct),
                time_s: of(&|r| r.error.is_none().then_some(r.time_s)),
                constraints: of(&|r| r.constraints.map(|v| v as f64)),
                binary_vars: of(&|r| r.binary_vars.map(|v| v as f64)),
                real_vars: of(&|r| r.real_vars.map(|v| v as f64)),
            }
        })
        .collect()
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0u32), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AverageRow {
    pub mode: Method,
    pub thb: Option<f64>,
    pub makespan: Option<f64>,
    pub gap_pct: Option<f64>,
    pub time_s: Option<f64>,
    pub constraints: Option<f64>,
    pub binary_vars: Option<f64>,
    pub real_vars: Option<f64>,
}

/// Formatting switches for tables.
#[derive(Debug, Clone, Copy, Default)]
pub struct TableFormat {
    /// Writes every time as `0` so that output is byte-stable.
    pub no_timings: bool,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

fn fixed(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(String::new, |v| format!("{v:.digits$}"))
}

fn cells(r: &ResultRow, fmt: TableFormat) -> [String; 9] {
    let makespan = match (&r.error, r.makespan, r.status) {
        (Some(_), _, _) => "error".to_string(),
        (None, Some(m), _) => m.to_string(),
        (None, None, Some(s)) => s.to_string(),
        (None, None, None) => String::new(),
    };
    [
        r.instance.clone(),
        r.mode.to_string(),
        opt(r.thb),
        makespan,
        fixed(r.gap_pct, 2),
        if fmt.no_timings { "0".into() } else { format!("{:.3}", r.time_s) },
        opt(r.constraints),
        opt(r.binary_vars),
        opt(r.real_vars),
    ]
}

fn average_cells(a: &AverageRow, fmt: TableFormat) -> [String; 9] {
    [
        "Average".into(),
        a.mode.to_string(),
        fixed(a.thb, 2),
        fixed(a.makespan, 2),
        fixed(a.gap_pct, 2),
        if fmt.no_timings { "0".into() } else { fixed(a.time_s, 3) },
        fixed(a.constraints, 1),
        fixed(a.binary_vars, 1),
        fixed(a.real_vars, 1),
    ]
}

fn all_cells(rows: &[ResultRow], fmt: TableFormat) -> Vec<[String; 9]> {
    let mut out: Vec<[String; 9]> = rows.iter().map(|r| cells(r, fmt)).collect();
    if !rows.is_empty() {
        out.extend(averages(rows).iter().map(|a| average_cells(a, fmt)));
    }
    out
}

/// CSV with the fixed header, one line per row and one `Average` line per
/// mode. An empty row list gives the header alone.
pub fn to_csv(rows: &[ResultRow], fmt: TableFormat) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("writing to memory");
    for c in all_cells(rows, fmt) {
        w.write_record(&c).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is utf-8")
}

/// Space-aligned text table with the same content as [`to_csv`].
pub fn to_table(rows: &[ResultRow], fmt: TableFormat) -> String {
    let body = all_cells(rows, fmt);
    let mut widths: Vec<usize> = CSV_HEADER.iter().map(|h| h.len()).collect();
    for c in &body {
        for (w, s) in widths.iter_mut().zip(c) {
            *w = (*w).max(s.len());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, c: &[String]| {
        let mut l = String::new();
        for (i, (s, w)) in c.iter().zip(&widths).enumerate() {
            if i < 2 {
                let _ = write!(l, "{s:<w$}  ");
            } else {
                let _ = write!(l, "{s:>w$}  ");
            }
        }
        out.push_str(l.trim_end());
        out.push('\n');
    };
    let header: Vec<String> = CSV_HEADER.iter().map(|s| s.to_string()).collect();
    line(&mut out, &header);
    for c in &body {
        line(&mut out, c);
    }
    out
}

/// Suite file: instance paths relative to the suite file, modes and solver
/// settings.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Suite {
    pub instances: Vec<PathBuf>,
    #[serde(default = "default_modes")]
    pub modes: Vec<String>,
    #[serde(default)]
    pub iterations: Option<u32>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub time_limit: Option<f64>,
    #[serde(default)]
    pub parts_mode: PartsMode,
    #[serde(default)]
    pub solver_cmd: Option<String>,
}

fn default_modes() -> Vec<String> {
    vec!["milp".into(), "hop".into()]
}

pub fn read_suite(path: &Path) -> Result<Suite, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Fs { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|e| IoError::Json {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })
}

/// Runs every mode on every instance. Instances are spread over `jobs`
/// threads; rows come back in suite order. A failing instance or mode yields
/// a flagged row and the run continues.
pub fn run_benchmark(suite: &Suite, base: &Path, opts: &RunOptions, jobs: usize) -> Vec<ResultRow> {
    let modes: Vec<Result<Method, String>> =
        suite.modes.iter().map(|m| m.parse::<Method>().map_err(|e| e.to_string())).collect();
    let n = suite.instances.len();
    let jobs = jobs.clamp(1, n.max(1));
    let mut per_instance: Vec<Vec<ResultRow>> = vec![Vec::new(); n];
    thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|j| {
                let modes = &modes;
                scope.spawn(move || {
                    (j..n)
                        .step_by(jobs)
                        .map(|i| (i, bench_instance(&base.join(&suite.instances[i]), modes, opts)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, rows) in h.join().expect("benchmark worker panicked") {
                per_instance[i] = rows;
            }
        }
    });
    per_instance.into_iter().flatten().collect()
}

fn bench_instance(path: &Path, modes: &[Result<Method, String>], opts: &RunOptions) -> Vec<ResultRow> {
    let fallback_name = path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let inst = io::read_instance(path);
    let name = match &inst {
        Ok(inst) if !inst.name().is_empty() => inst.name().to_string(),
        _ => fallback_name,
    };
    modes
        .iter()
        .map(|mode| {
            let mode = match mode {
                Ok(m) => *m,
                Err(e) => return ResultRow::failed(&name, Method::Milp, e.clone()),
            };
            match &inst {
                Err(e) => ResultRow::failed(&name, mode, e.to_string()),
                Ok(inst) => match solve_instance(inst, mode, opts) {
                    Ok(r) => ResultRow::from_report(&name, &r),
                    Err(e) => ResultRow::failed(&name, mode, e.to_string()),
                },
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use curing_core::domain::fixtures;

    fn row(name: &str, mode: Method, makespan: u32, constraints: usize) -> ResultRow {
        ResultRow {
            instance: name.into(),
            mode,
            thb: Some(makespan + 1),
            makespan: Some(makespan),
            gap_pct: Some(0.0),
            time_s: 1.5,
            constraints: Some(constraints),
            binary_vars: Some(1),
            real_vars: Some(2),
            status: Some(Status::Optimal),
            error: None,
        }
    }

    #[test]
    fn empty_suite_is_header_only() {
        assert_eq!(to_csv(&[], TableFormat::default()), "instance,mode,thb,makespan,gap_pct,time_s,constraints,binary_vars,real_vars\n");
    }

    #[test]
    fn averages_per_mode() {
        let rows = [
            row("a", Method::Milp, 2, 100),
            row("a", Method::Hop, 1, 40),
            row("b", Method::Milp, 4, 300),
            row("b", Method::Hop, 3, 60),
            ResultRow::failed("c", Method::Hop, "boom"),
        ];
        let avg = averages(&rows);
        assert_eq!(avg.len(), 2);
        assert_eq!((avg[0].mode, avg[0].makespan, avg[0].constraints), (Method::Milp, Some(3.0), Some(200.0)));
        assert_eq!((avg[1].mode, avg[1].makespan, avg[1].time_s), (Method::Hop, Some(2.0), Some(1.5)));
        let csv = to_csv(&rows, TableFormat { no_timings: true });
        assert!(csv.contains("\nc,hop,,error,,0,,,\n"), "{csv}");
        assert!(csv.ends_with("Average,hop,3.00,2.00,0.00,0,50.0,1.0,2.0\n"), "{csv}");
    }

    #[test]
    fn table_columns_align() {
        let rows = [row("long-instance-name", Method::Milp, 12, 5750), row("s", Method::Hop, 3, 4)];
        let t = to_table(&rows, TableFormat::default());
        assert_eq!(t.lines().count(), 5, "{t}");
        let widths: Vec<usize> = t.lines().map(str::len).collect();
        assert!(widths.windows(2).all(|w| w[0] == w[1]), "{t}");
    }

    #[test]
    fn modes_on_toy1() {
        let inst = fixtures::toy1();
        let opts = RunOptions::default();
        let got: Vec<(Method, u32, u32)> = [Method::Heuristic, Method::Milp, Method::Hop, Method::Exact]
            .into_iter()
            .map(|m| {
                let r = solve_instance(&inst, m, &opts).unwrap();
                (m, r.thb, r.makespan.unwrap())
            })
            .collect();
        assert_eq!(
            got,
            [(Method::Heuristic, 2, 2), (Method::Milp, 2, 1), (Method::Hop, 2, 1), (Method::Exact, 2, 1)]
        );
    }
}
