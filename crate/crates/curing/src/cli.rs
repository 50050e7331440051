//! Command-line interface.
//!
//! Exit codes: 0 success, 1 infeasible or no schedule, 2 usage or input
//! error, 3 limit reached with an incumbent.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::builder::{PossibleValuesParser, TypedValueParser};
use clap::{Args, Parser, Subcommand, ValueEnum};

use curing_core::exact::{Method, SolveReport, Status};
use curing_core::gen::{generate_spec, Scenario, ScenarioSpec};
use curing_core::heuristic::HeuristicConfig;
use curing_core::milp::{build_model, emit_lp};
use curing_core::thb::compute_thb;
use curing_core::{validate_instance, validate_schedule, Error, PartsMode};

use crate::bench::{read_suite, run_benchmark, solve_instance, to_csv, to_table, ResultRow, RunOptions, TableFormat};
use crate::io;
use crate::runner::default_workers;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "curing", version, about = "Minimum-makespan tire-curing schedules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance.
    Solve(SolveArgs),
    /// Write random instances of a scenario.
    Generate(GenerateArgs),
    /// Run a suite of instances and tabulate the results.
    Bench(BenchArgs),
    /// Check an instance and optionally a schedule for it.
    Validate(ValidateArgs),
}

fn mode_parser() -> impl TypedValueParser<Value = Method> {
    PossibleValuesParser::new(["heuristic", "milp", "hop", "exact"])
        .map(|s| s.parse::<Method>().expect("restricted to known modes"))
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Heuristic iterations.
    #[arg(long, default_value_t = 100)]
    pub iterations: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Solver time limit in seconds.
    #[arg(long, default_value_t = 3600.0)]
    pub time_limit: f64,
    #[arg(long, default_value = "per-heater")]
    pub parts_mode: PartsMode,
    /// External MILP solver, called as `<cmd> <model.lp> <out.sol>`.
    #[arg(long)]
    pub solver_cmd: Option<String>,
    /// Heuristic threads; defaults to the number of CPUs.
    #[arg(long)]
    pub workers: Option<usize>,
}

impl SolverArgs {
    fn options(&self) -> RunOptions {
        RunOptions {
            heuristic: HeuristicConfig {
                total_iterations: self.iterations,
                seed: self.seed,
                worker_count: self.workers.unwrap_or_else(default_workers),
            },
            time_limit_seconds: self.time_limit,
            parts_mode: self.parts_mode,
            solver_cmd: self.solver_cmd.clone(),
            ..RunOptions::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_parser = mode_parser(), default_value = "hop")]
    pub mode: Method,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Write the model at the horizon used by the run.
    #[arg(long)]
    pub emit_lp: Option<PathBuf>,
    /// Write a one-row result CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the schedule as JSON.
    #[arg(long)]
    pub schedule_out: Option<PathBuf>,
    /// Write times as 0 so that the CSV is byte-stable.
    #[arg(long)]
    pub no_timings: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ScenarioArg {
    Small,
    Medium,
    Large,
}

impl From<ScenarioArg> for Scenario {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::Small => Scenario::Small,
            ScenarioArg::Medium => Scenario::Medium,
            ScenarioArg::Large => Scenario::Large,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub scenario: ScenarioArg,
    #[arg(long, default_value_t = 15)]
    pub count: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub suite: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Instances run concurrently.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Heuristic threads per instance.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long)]
    pub no_timings: bool,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub schedule: Option<PathBuf>,
    #[arg(long, default_value = "per-heater")]
    pub parts_mode: PartsMode,
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve(&a),
        Command::Generate(a) => generate(&a),
        Command::Bench(a) => bench(&a),
        Command::Validate(a) => validate(&a),
    };
    match result {
        Ok(code) => code,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}

type CmdResult = Result<i32, (i32, String)>;

fn usage(e: impl std::fmt::Display) -> (i32, String) {
    (EXIT_USAGE, e.to_string())
}

fn solver_error(e: Error) -> (i32, String) {
    let code = match e {
        Error::Malformed(_) => EXIT_USAGE,
        _ => EXIT_INFEASIBLE,
    };
    (code, e.to_string())
}

/// Exit code of a finished run.
pub fn exit_code(r: &SolveReport) -> i32 {
    match (r.status, r.makespan) {
        (_, None) => EXIT_INFEASIBLE,
        (Status::Feasible, Some(_)) if r.mode != Method::Heuristic => EXIT_LIMIT,
        _ => EXIT_OK,
    }
}

fn solve(a: &SolveArgs) -> CmdResult {
    let inst = io::read_instance(&a.instance).map_err(usage)?;
    let report = solve_instance(&inst, a.mode, &a.solver.options()).map_err(solver_error)?;

    println!("instance {}", inst.name());
    println!("mode {}", report.mode);
    println!("status {}", report.status);
    println!("thb {}", report.thb);
    match report.makespan {
        Some(m) => println!("makespan {m}"),
        None => println!("makespan none"),
    }
    if let Some(g) = report.gap_percent {
        println!("gap_pct {g:.2}");
    }
    if let Some(s) = report.stats {
        println!("constraints {}", s.n_constraints);
        println!("binary_vars {}", s.n_binary_vars);
        println!("real_vars {}", s.n_integer_vars);
    }
    if !a.no_timings {
        println!("time_s {:.3}", report.wall_seconds);
    }

    if let Some(path) = &a.emit_lp {
        let model = build_model(&inst, report.thb, a.solver.parts_mode);
        io::write_text(path, &emit_lp(&model)).map_err(usage)?;
    }
    if let Some(path) = &a.out {
        let row = ResultRow::from_report(inst.name(), &report);
        io::write_text(path, &to_csv(&[row], TableFormat { no_timings: a.no_timings })).map_err(usage)?;
    }
    if let (Some(path), Some(s)) = (&a.schedule_out, &report.schedule) {
        io::write_schedule(path, s).map_err(usage)?;
    }
    Ok(exit_code(&report))
}

/// Seed of the `index`-th generated instance.
pub fn instance_seed(seed: u64, index: u32) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index as u64)
}

fn generate(a: &GenerateArgs) -> CmdResult {
    let scenario: Scenario = a.scenario.into();
    let spec = ScenarioSpec::new(scenario);
    let mut files = Vec::new();
    for i in 1..=a.count {
        let mut inst = generate_spec(&spec, instance_seed(a.seed, i));
        inst.name = format!("{}-{i:02}", scenario.as_str());
        let file = format!("{}.json", inst.name);
        io::write_instance(&a.out_dir.join(&file), &inst).map_err(usage)?;
        files.push(file);
    }
    let suite = serde_json::json!({
        "instances": files,
        "modes": ["milp", "hop"],
        "iterations": scenario.iterations(),
        "seed": a.seed,
    });
    let text = serde_json::to_string_pretty(&suite).expect("json values serialize") + "\n";
    io::write_text(&a.out_dir.join("suite.json"), &text).map_err(usage)?;
    println!("wrote {} instances to {}", a.count, a.out_dir.display());
    Ok(EXIT_OK)
}

fn bench(a: &BenchArgs) -> CmdResult {
    let suite = read_suite(&a.suite).map_err(usage)?;
    let base = a.suite.parent().unwrap_or(Path::new("."));
    let defaults = RunOptions::default();
    let opts = RunOptions {
        heuristic: HeuristicConfig {
            total_iterations: suite.iterations.unwrap_or(defaults.heuristic.total_iterations),
            seed: suite.seed,
            worker_count: a.workers,
        },
        time_limit_seconds: suite.time_limit.unwrap_or(defaults.time_limit_seconds),
        parts_mode: suite.parts_mode,
        solver_cmd: suite.solver_cmd.clone(),
        ..defaults
    };
    let rows = run_benchmark(&suite, base, &opts, a.jobs);
    let fmt = TableFormat { no_timings: a.no_timings };
    print!("{}", to_table(&rows, fmt));
    for r in rows.iter().filter(|r| r.error.is_some()) {
        eprintln!("{} {}: {}", r.instance, r.mode, r.error.as_deref().unwrap_or(""));
    }
    if let Some(path) = &a.out {
        io::write_text(path, &to_csv(&rows, fmt)).map_err(usage)?;
    }
    Ok(EXIT_OK)
}

fn validate(a: &ValidateArgs) -> CmdResult {
    let inst = io::read_instance(&a.instance).map_err(usage)?;
    let report = validate_instance(&inst);
    let mut code = EXIT_OK;
    if report.is_admissible() {
        println!("instance {}: admissible", inst.name());
        if let Ok(thb) = compute_thb(&inst) {
            println!("thb {thb}");
        }
    } else {
        for v in &report.violations {
            println!("instance violation: {v}");
        }
        code = EXIT_INFEASIBLE;
    }
    if let Some(path) = &a.schedule {
        let s = io::read_schedule(path).map_err(usage)?;
        let fr = validate_schedule(&inst, &s, a.parts_mode);
        if fr.is_feasible() {
            println!("schedule: feasible, makespan {}", s.makespan());
        } else {
            for v in &fr.violations {
                println!("schedule violation: {v}");
            }
            code = EXIT_INFEASIBLE;
        }
    }
    Ok(code)
}
