//! Depth-first branch-and-bound over per-period heater configurations.
//!
//! Each node fixes the configuration of every heater for one period and
//! lets every loaded slot cure as many tires as the period allows (or as
//! the mold still needs). Producing less never shortens a schedule, so the
//! search is exact for the makespan. Nodes are pruned by a residual-demand
//! bound and by a memo of `(heater loads, residual demand)` states already
//! reached no later.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::domain::{AssignmentTuple, Config, Instance, PartsMode, Schedule};
use crate::error::Error;
use crate::milp::ModelStats;
use crate::Clock;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchLimits {
    pub max_nodes: u64,
    pub time_limit_seconds: f64,
    /// Horizons above this are clamped.
    pub max_thb: u32,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_nodes: 5_000_000, time_limit_seconds: 60.0, max_thb: 10_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Heuristic,
    Milp,
    Hop,
    Exact,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Heuristic => "heuristic",
            Method::Milp => "milp",
            Method::Hop => "hop",
            Method::Exact => "exact",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "heuristic" => Ok(Method::Heuristic),
            "milp" => Ok(Method::Milp),
            "hop" => Ok(Method::Hop),
            "exact" => Ok(Method::Exact),
            _ => Err(Error::Malformed(alloc::format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Optimal,
    /// An incumbent exists but the search stopped before proving it.
    Feasible,
    /// No schedule fits the horizon.
    Infeasible,
    /// Stopped without any schedule.
    Limit,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Optimal => "optimal",
            Status::Feasible => "feasible",
            Status::Infeasible => "infeasible",
            Status::Limit => "limit",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub mode: Method,
    pub status: Status,
    pub thb: u32,
    pub makespan: Option<u32>,
    /// `0` when optimal, else `100 (incumbent - bound) / incumbent`.
    pub gap_percent: Option<f64>,
    pub wall_seconds: f64,
    pub stats: Option<ModelStats>,
    pub schedule: Option<Schedule>,
    pub nodes: u64,
}

impl SolveReport {
    pub fn empty(mode: Method, thb: u32) -> Self {
        SolveReport {
            mode,
            status: Status::Limit,
            thb,
            makespan: None,
            gap_percent: None,
            wall_seconds: 0.0,
            stats: None,
            schedule: None,
            nodes: 0,
        }
    }
}

/// Lower bound on the makespan from scratch: the slowest mold at its best
/// possible parallel rate.
pub fn demand_lower_bound(inst: &Instance) -> u32 {
    let residual: Vec<u32> = inst.molds().iter().map(|m| m.demand).collect();
    let rates = max_rates(inst);
    bound_from(&residual, &rates).unwrap_or(u32::MAX)
}

/// Tires of each mold all heaters together can cure in one period.
fn max_rates(inst: &Instance) -> Vec<u64> {
    (0..inst.n_molds())
        .map(|i| {
            let heaters = inst.compatible_heaters(i).count() as u64;
            let slots = (inst.mold(i).nm as u64).min(2 * heaters);
            let best = inst
                .compatible_heaters(i)
                .filter_map(|k| inst.tv(i, k))
                .map(|tv| (inst.phi() / tv.max(1)) as u64)
                .max()
                .unwrap_or(0);
            slots * best
        })
        .collect()
}

/// Periods still needed; `None` when some demanded mold cannot be produced.
fn bound_from(residual: &[u32], rates: &[u64]) -> Option<u32> {
    let mut lb = 0u64;
    for (&r, &rate) in residual.iter().zip(rates) {
        if r == 0 {
            continue;
        }
        if rate == 0 {
            return None;
        }
        lb = lb.max((r as u64).div_ceil(rate));
    }
    Some(lb.min(u32::MAX as u64) as u32)
}

struct Search<'a, C: Clock + ?Sized> {
    inst: &'a Instance,
    mode: PartsMode,
    limits: SearchLimits,
    clock: &'a C,
    rates: Vec<u64>,
    /// Candidate configurations per heater, empty last.
    candidates: Vec<Vec<Config>>,
    /// Best makespan known; only strictly better schedules are searched for.
    best: u32,
    best_path: Option<Vec<Vec<(Config, u32)>>>,
    path: Vec<Vec<(Config, u32)>>,
    memo: BTreeMap<(Vec<Config>, Vec<u32>), u32>,
    nodes: u64,
    /// Every call, pruned or not; paces the clock checks.
    ticks: u64,
    stopped: bool,
    root_lb: u32,
}

impl<C: Clock + ?Sized> Search<'_, C> {
    fn out_of_budget(&mut self) -> bool {
        if !self.stopped
            && (self.nodes >= self.limits.max_nodes
                || (self.ticks.is_multiple_of(1024) && self.clock.elapsed_secs() >= self.limits.time_limit_seconds))
        {
            self.stopped = true;
        }
        self.stopped
    }

    /// Explores all schedules extending `path` (periods `0..t`).
    fn dfs(&mut self, t: u32, loads: &[Config], residual: &[u32]) {
        self.ticks += 1;
        if self.ticks.is_multiple_of(1024) && self.out_of_budget() {
            return;
        }
        if residual.iter().all(|&r| r == 0) {
            if t < self.best {
                self.best = t;
                self.best_path = Some(self.path.clone());
            }
            return;
        }
        let Some(lb) = bound_from(residual, &self.rates) else {
            return;
        };
        if t + lb >= self.best || self.best <= self.root_lb {
            return;
        }
        let key = (loads.to_vec(), residual.to_vec());
        match self.memo.get(&key) {
            Some(&seen) if seen <= t => return,
            _ => {
                self.memo.insert(key, t);
            }
        }
        self.nodes += 1;
        if self.out_of_budget() {
            return;
        }

        let n_h = self.inst.n_heaters();
        let mut ordered: Vec<Vec<Config>> = Vec::with_capacity(n_h);
        for k in 0..n_h {
            let mut c: Vec<Config> = self.candidates[k]
                .iter()
                .copied()
                .filter(|cfg| cfg.is_empty() || cfg.slots().any(|m| residual[m] > 0))
                .collect();
            c.sort_by_key(|cfg| {
                let joint: u64 = cfg.slots().map(|m| residual[m] as u64).sum();
                (cfg.is_empty(), core::cmp::Reverse(joint))
            });
            ordered.push(c);
        }
        let mut choice = vec![Config::EMPTY; n_h];
        let mut mold_use = vec![0u32; self.inst.n_molds()];
        let mut part_use = vec![0u32; self.inst.parts().len()];
        self.choose(t, loads, residual, 0, &ordered, &mut choice, &mut mold_use, &mut part_use);
    }

    #[allow(clippy::too_many_arguments)]
    fn choose(
        &mut self,
        t: u32,
        loads: &[Config],
        residual: &[u32],
        k: usize,
        ordered: &[Vec<Config>],
        choice: &mut Vec<Config>,
        mold_use: &mut Vec<u32>,
        part_use: &mut Vec<u32>,
    ) {
        if self.stopped {
            return;
        }
        let inst = self.inst;
        if k == ordered.len() {
            if choice.iter().all(|c| c.is_empty()) {
                return;
            }
            let mut next = residual.to_vec();
            let mut period = Vec::with_capacity(choice.len());
            for (h, &cfg) in choice.iter().enumerate() {
                if cfg.is_empty() {
                    period.push((cfg, 0));
                    continue;
                }
                let cap = inst.period_capacity(loads[h], cfg, h).unwrap_or(0);
                let need = match (cfg.first(), cfg.second()) {
                    (Some(a), Some(b)) if a == b => next[a].div_ceil(2),
                    (Some(a), Some(b)) => next[a].max(next[b]),
                    (None, Some(b)) => next[b],
                    _ => 0,
                };
                let q = cap.min(need);
                for m in cfg.slots() {
                    next[m] = next[m].saturating_sub(q);
                }
                period.push((cfg, q));
            }
            self.path.push(period);
            self.dfs(t + 1, choice, &next);
            self.path.pop();
            return;
        }
        for &cfg in &ordered[k] {
            if !cfg.is_empty() && inst.period_capacity(loads[k], cfg, k).is_none() {
                continue;
            }
            let fits_molds = cfg.molds().all(|(m, c)| mold_use[m] + c <= inst.mold(m).nm);
            let fits_parts = (0..inst.parts().len()).all(|q| {
                let need = inst.part_need(cfg, q);
                need == 0
                    || match self.mode {
                        PartsMode::PerHeater => need <= inst.parts()[q].np,
                        PartsMode::Global => part_use[q] + need <= inst.parts()[q].np,
                    }
            });
            if !fits_molds || !fits_parts {
                continue;
            }
            for (m, c) in cfg.molds() {
                mold_use[m] += c;
            }
            for (q, u) in part_use.iter_mut().enumerate() {
                *u += inst.part_need(cfg, q);
            }
            choice[k] = cfg;
            self.choose(t, loads, residual, k + 1, ordered, choice, mold_use, part_use);
            for (m, c) in cfg.molds() {
                mold_use[m] -= c;
            }
            for (q, u) in part_use.iter_mut().enumerate() {
                *u -= inst.part_need(cfg, q);
            }
            if self.stopped {
                return;
            }
        }
        choice[k] = Config::EMPTY;
    }
}

/// Turns per-period heater loads into tuples, merging consecutive periods
/// with the same configuration.
fn path_to_schedule(inst: &Instance, path: &[Vec<(Config, u32)>]) -> Schedule {
    let mut tuples: Vec<AssignmentTuple> = Vec::new();
    for k in 0..inst.n_heaters() {
        let mut open: Option<usize> = None;
        for (p, period) in path.iter().enumerate() {
            let (cfg, q) = period[k];
            if cfg.is_empty() {
                open = None;
                continue;
            }
            let (m1, m2) = inst.config_ids(cfg);
            match open {
                Some(ix) if tuples[ix].m1 == m1 && tuples[ix].m2 == m2 => {
                    tuples[ix].q += q;
                    tuples[ix].length += 1;
                }
                _ => {
                    open = Some(tuples.len());
                    tuples.push(AssignmentTuple {
                        id: tuples.len() as u32 + 1,
                        m1,
                        m2,
                        q,
                        heater: inst.heaters()[k],
                        start: p as u32,
                        length: 1,
                    });
                }
            }
        }
    }
    Schedule::new(tuples)
}

/// Minimum makespan within `thb` periods.
///
/// `incumbent`, if given and feasible within `thb`, seeds the bound; it is
/// returned when nothing better exists.
pub fn solve_exact<C: Clock + ?Sized>(
    inst: &Instance,
    thb: u32,
    mode: PartsMode,
    limits: &SearchLimits,
    incumbent: Option<&Schedule>,
    clock: &C,
) -> SolveReport {
    let thb = thb.min(limits.max_thb);
    let started = clock.elapsed_secs();
    let mut report = SolveReport::empty(Method::Exact, thb);
    let candidates = (0..inst.n_heaters())
        .map(|k| {
            let mut c: Vec<Config> = inst
                .heater_pairs(k)
                .into_iter()
                .filter(|&cfg| inst.config_self_sufficient(cfg))
                .collect();
            c.push(Config::EMPTY);
            c
        })
        .collect();
    let incumbent = incumbent.filter(|s| s.makespan() <= thb);
    let root_lb = demand_lower_bound(inst);
    let mut search = Search {
        inst,
        mode,
        limits: *limits,
        clock,
        rates: max_rates(inst),
        candidates,
        best: incumbent.map_or(thb.saturating_add(1), |s| s.makespan()),
        best_path: None,
        path: Vec::new(),
        memo: BTreeMap::new(),
        nodes: 0,
        ticks: 0,
        stopped: false,
        root_lb,
    };
    let loads: Vec<Config> = (0..inst.n_heaters()).map(|k| inst.init_config(k)).collect();
    let residual: Vec<u32> = inst.molds().iter().map(|m| m.demand).collect();
    search.dfs(0, &loads, &residual);

    report.nodes = search.nodes;
    report.wall_seconds = clock.elapsed_secs() - started;
    let schedule = match search.best_path.take() {
        Some(path) => Some(path_to_schedule(inst, &path)),
        None => incumbent.cloned(),
    };
    let proved = !search.stopped || search.best <= root_lb;
    match schedule {
        Some(s) => {
            let ms = s.makespan();
            report.makespan = Some(ms);
            if proved {
                report.status = Status::Optimal;
                report.gap_percent = Some(0.0);
            } else {
                report.status = Status::Feasible;
                let lb = root_lb.min(ms) as f64;
                report.gap_percent = Some(if ms == 0 { 0.0 } else { 100.0 * (ms as f64 - lb) / ms as f64 });
            }
            report.schedule = Some(s);
        }
        None => {
            report.status = if proved { Status::Infeasible } else { Status::Limit };
        }
    }
    report
}
