use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::instance::{Config, HeaterId, Instance, MoldId, PartId, PartsMode};
use super::schedule::Schedule;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceViolation {
    ZeroPeriod,
    ZeroTime { mold: MoldId, what: &'static str },
    ZeroCuringTime { mold: MoldId, heater: HeaterId },
    CuringExceedsPeriod { mold: MoldId, heater: HeaterId, tv: u32, phi: u32 },
    NoCopies { mold: MoldId },
    NoHeater { mold: MoldId },
    PartUnavailable { mold: MoldId, part: PartId },
    InitOverloaded { heater: HeaterId, count: u32 },
    InitIncompatible { mold: MoldId, heater: HeaterId },
    OverheadExceedsPeriod { overhead: u32, phi: u32 },
}

impl fmt::Display for InstanceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use InstanceViolation::*;
        match self {
            ZeroPeriod => write!(f, "period length is zero"),
            ZeroTime { mold, what } => write!(f, "mold {mold}: {what} time must be positive"),
            ZeroCuringTime { mold, heater } => {
                write!(f, "mold {mold} heater {heater}: curing time must be positive")
            }
            CuringExceedsPeriod { mold, heater, tv, phi } => write!(
                f,
                "curing time exceeds period: mold {mold} heater {heater} ({tv} > {phi})"
            ),
            NoCopies { mold } => write!(f, "demanded mold has no copies: mold {mold}"),
            NoHeater { mold } => write!(f, "demanded mold has no compatible heater: mold {mold}"),
            PartUnavailable { mold, part } => {
                write!(f, "demanded mold requires an unavailable part: mold {mold} part {part}")
            }
            InitOverloaded { heater, count } => {
                write!(f, "initial load exceeds two molds: heater {heater} holds {count}")
            }
            InitIncompatible { mold, heater } => {
                write!(f, "initial mold not compatible with its heater: mold {mold} heater {heater}")
            }
            OverheadExceedsPeriod { overhead, phi } => write!(
                f,
                "worst-case setup and removal overhead exceeds period ({overhead} > {phi})"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<InstanceViolation>,
}

impl ValidationReport {
    pub fn is_admissible(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_instance(inst: &Instance) -> ValidationReport {
    use InstanceViolation::*;
    let mut v = Vec::new();
    let phi = inst.phi();
    if phi == 0 {
        v.push(ZeroPeriod);
    }
    for (i, m) in inst.molds().iter().enumerate() {
        if m.tc == 0 {
            v.push(ZeroTime { mold: m.id, what: "setup" });
        }
        if m.tq == 0 {
            v.push(ZeroTime { mold: m.id, what: "removal" });
        }
        for (k, &h) in inst.heaters().iter().enumerate() {
            match inst.tv(i, k) {
                Some(0) => v.push(ZeroCuringTime { mold: m.id, heater: h }),
                Some(tv) if tv > phi => {
                    v.push(CuringExceedsPeriod { mold: m.id, heater: h, tv, phi })
                }
                _ => {}
            }
        }
        if m.demand > 0 {
            if m.nm == 0 {
                v.push(NoCopies { mold: m.id });
            }
            if inst.compatible_heaters(i).next().is_none() {
                v.push(NoHeater { mold: m.id });
            }
            for &q in inst.parts_of(i) {
                if inst.parts()[q].np == 0 {
                    v.push(PartUnavailable { mold: m.id, part: inst.parts()[q].id });
                }
            }
        }
    }
    for (k, &h) in inst.heaters().iter().enumerate() {
        let count: u32 = (0..inst.n_molds()).map(|m| inst.init_count(k, m)).sum();
        if count > 2 {
            v.push(InitOverloaded { heater: h, count });
        }
        for m in 0..inst.n_molds() {
            if inst.init_count(k, m) > 0 && inst.tv(m, k).is_none() {
                v.push(InitIncompatible { mold: inst.mold_id(m), heater: h });
            }
        }
    }
    let max_tc = inst.molds().iter().map(|m| m.tc).max().unwrap_or(0);
    let max_tq = inst.molds().iter().map(|m| m.tq).max().unwrap_or(0);
    let overhead = 2 * max_tc + 2 * max_tq;
    if phi > 0 && overhead > phi {
        v.push(OverheadExceedsPeriod { overhead, phi });
    }
    ValidationReport { violations: v }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScheduleViolation {
    UnknownReference { tuple: u32 },
    InvalidPair { tuple: u32 },
    IncompatibleHeater { tuple: u32 },
    ZeroLength { tuple: u32 },
    HeaterCapacity { heater: HeaterId, period: u32 },
    Overhead { heater: HeaterId, period: u32 },
    ProductionCapacity { tuple: u32, q: u32, capacity: u64 },
    MoldCopies { mold: MoldId, period: u32, used: u32, available: u32 },
    Parts { part: PartId, heater: Option<HeaterId>, period: u32, used: u32, available: u32 },
    DemandUnmet { mold: MoldId, produced: u64, demand: u32 },
}

impl fmt::Display for ScheduleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ScheduleViolation::*;
        match self {
            UnknownReference { tuple } => write!(f, "tuple {tuple}: unknown mold or heater"),
            InvalidPair { tuple } => write!(f, "tuple {tuple}: molds cannot be paired"),
            IncompatibleHeater { tuple } => {
                write!(f, "tuple {tuple}: heater incompatible with its molds")
            }
            ZeroLength { tuple } => write!(f, "tuple {tuple}: zero length"),
            HeaterCapacity { heater, period } => {
                write!(f, "heater capacity violated: heater {heater} period {period}")
            }
            Overhead { heater, period } => write!(
                f,
                "setup and removal time exceeds the period: heater {heater} period {period}"
            ),
            ProductionCapacity { tuple, q, capacity } => write!(
                f,
                "production capacity violated: tuple {tuple} makes {q} per slot, at most {capacity} fit"
            ),
            MoldCopies { mold, period, used, available } => write!(
                f,
                "mold copies exceeded: mold {mold} period {period} ({used} > {available})"
            ),
            Parts { part, heater: Some(h), period, used, available } => write!(
                f,
                "part availability exceeded: part {part} heater {h} period {period} ({used} > {available})"
            ),
            Parts { part, heater: None, period, used, available } => write!(
                f,
                "part availability exceeded: part {part} period {period} ({used} > {available})"
            ),
            DemandUnmet { mold, produced, demand } => {
                write!(f, "demand unmet: mold {mold} produced {produced} of {demand}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FeasibilityReport {
    pub violations: Vec<ScheduleViolation>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Independent feasibility check of a schedule.
///
/// A heater cell not covered by any tuple is empty: molds still loaded are
/// taken out in that period, which produces nothing. The first period of a
/// tuple pays setup for molds it adds and removal for molds it replaces;
/// later periods run at steady capacity.
pub fn validate_schedule(inst: &Instance, s: &Schedule, mode: PartsMode) -> FeasibilityReport {
    use ScheduleViolation::*;
    let mut v = Vec::new();
    let n_h = inst.n_heaters();

    struct Resolved {
        tuple: usize,
        cfg: Config,
        heater: usize,
    }
    let mut resolved = Vec::new();
    for (ti, t) in s.tuples.iter().enumerate() {
        let (Some(cfg), Some(k)) = (inst.config_of(t.m1, t.m2), inst.heater_ix(t.heater)) else {
            v.push(UnknownReference { tuple: t.id });
            continue;
        };
        if !inst.is_mold_pair(cfg) {
            v.push(InvalidPair { tuple: t.id });
            continue;
        }
        if !inst.can_host(cfg, k) {
            v.push(IncompatibleHeater { tuple: t.id });
            continue;
        }
        if t.length == 0 {
            v.push(ZeroLength { tuple: t.id });
            continue;
        }
        resolved.push(Resolved { tuple: ti, cfg, heater: k });
    }

    let horizon = resolved
        .iter()
        .map(|r| s.tuples[r.tuple].end())
        .max()
        .unwrap_or(0) as usize;
    let mut grid: Vec<Vec<Option<usize>>> = vec![vec![None; horizon]; n_h];
    for (ri, r) in resolved.iter().enumerate() {
        let t = &s.tuples[r.tuple];
        for p in t.start..t.end() {
            let cell = &mut grid[r.heater][p as usize];
            if cell.is_some() {
                v.push(HeaterCapacity { heater: inst.heaters()[r.heater], period: p });
            } else {
                *cell = Some(ri);
            }
        }
    }
    let cfg_at = |k: usize, p: usize| grid[k][p].map_or(Config::EMPTY, |ri| resolved[ri].cfg);
    let before = |k: usize, p: usize| {
        if p == 0 {
            inst.init_config(k)
        } else {
            cfg_at(k, p - 1)
        }
    };

    for r in &resolved {
        let t = &s.tuples[r.tuple];
        let prev = before(r.heater, t.start as usize);
        let steady = inst.steady_capacity(r.cfg, r.heater).unwrap_or(0) as u64;
        match inst.period_capacity(prev, r.cfg, r.heater) {
            None => v.push(Overhead { heater: t.heater, period: t.start }),
            Some(first) => {
                let capacity = first as u64 + (t.length as u64 - 1) * steady;
                if t.q as u64 > capacity {
                    v.push(ProductionCapacity { tuple: t.id, q: t.q, capacity });
                }
            }
        }
    }

    for (k, row) in grid.iter().enumerate() {
        for (p, cell) in row.iter().enumerate() {
            if cell.is_none() {
                let prev = before(k, p);
                if inst.transition_overhead(prev, Config::EMPTY) > inst.phi() {
                    v.push(Overhead { heater: inst.heaters()[k], period: p as u32 });
                }
            }
        }
    }

    for p in 0..horizon {
        let mut used = vec![0u32; inst.n_molds()];
        for k in 0..n_h {
            for (m, c) in cfg_at(k, p).molds() {
                used[m] += c;
            }
        }
        for (m, &u) in used.iter().enumerate() {
            if u > inst.mold(m).nm {
                v.push(MoldCopies {
                    mold: inst.mold_id(m),
                    period: p as u32,
                    used: u,
                    available: inst.mold(m).nm,
                });
            }
        }
        for (q, part) in inst.parts().iter().enumerate() {
            match mode {
                PartsMode::PerHeater => {
                    for k in 0..n_h {
                        let need = inst.part_need(cfg_at(k, p), q);
                        if need > part.np {
                            v.push(Parts {
                                part: part.id,
                                heater: Some(inst.heaters()[k]),
                                period: p as u32,
                                used: need,
                                available: part.np,
                            });
                        }
                    }
                }
                PartsMode::Global => {
                    let need: u32 = (0..n_h).map(|k| inst.part_need(cfg_at(k, p), q)).sum();
                    if need > part.np {
                        v.push(Parts {
                            part: part.id,
                            heater: None,
                            period: p as u32,
                            used: need,
                            available: part.np,
                        });
                    }
                }
            }
        }
    }

    for m in inst.molds() {
        let produced: u64 = resolved
            .iter()
            .map(|r| s.tuples[r.tuple].production_of(m.id))
            .sum();
        if produced < m.demand as u64 {
            v.push(DemandUnmet { mold: m.id, produced, demand: m.demand });
        }
    }
    FeasibilityReport { violations: v }
}
