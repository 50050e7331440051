//! Mixed-integer model of the problem over a fixed horizon of `thb` periods.
//!
//! Periods are numbered `1..=thb`; period `0` only carries the initial heater
//! loads. Capacity rows are kept in integer form by clearing the curing-time
//! denominator, and the production/assignment coupling uses the floored
//! per-period capacity as its big-M.

mod assignment;
mod lp;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::domain::{derive_aux_sets, HeaterId, Instance, MoldId, PartsMode};

pub use assignment::{check_assignment, encode_schedule, extract_schedule, Assignment};
pub use lp::emit_lp;

/// A model variable, indexed by ids. `Z` and `U` take `m1 <= m2`, with
/// `m1 = 0` for a single mold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X { mold: MoldId, heater: HeaterId, t: u32 },
    Y { mold: MoldId, heater: HeaterId, t: u32 },
    Yp { mold: MoldId, heater: HeaterId, t: u32 },
    Z { m1: MoldId, m2: MoldId, heater: HeaterId, t: u32 },
    W { t: u32 },
    U { m1: MoldId, m2: MoldId, heater: HeaterId, t: u32 },
    Prd { mold: MoldId, t: u32 },
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Var::X { mold, heater, t } => write!(f, "x_{mold}_{heater}_{t}"),
            Var::Y { mold, heater, t } => write!(f, "y_{mold}_{heater}_{t}"),
            Var::Yp { mold, heater, t } => write!(f, "yp_{mold}_{heater}_{t}"),
            Var::Z { m1, m2, heater, t } => write!(f, "z_{m1}_{m2}_{heater}_{t}"),
            Var::W { t } => write!(f, "w_{t}"),
            Var::U { m1, m2, heater, t } => write!(f, "u_{m1}_{m2}_{heater}_{t}"),
            Var::Prd { mold, t } => write!(f, "prd_{mold}_{t}"),
        }
    }
}

impl Var {
    /// Inverse of `Display`.
    pub fn parse(name: &str) -> Option<Var> {
        let (head, rest) = name.split_once('_')?;
        let mut nums = [0u32; 4];
        let mut n = 0;
        for part in rest.split('_') {
            if n == 4 || part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            nums[n] = part.parse().ok()?;
            n += 1;
        }
        let [a, b, c, d] = nums;
        Some(match (head, n) {
            ("x", 3) => Var::X { mold: MoldId(a), heater: HeaterId(b), t: c },
            ("y", 3) => Var::Y { mold: MoldId(a), heater: HeaterId(b), t: c },
            ("yp", 3) => Var::Yp { mold: MoldId(a), heater: HeaterId(b), t: c },
            ("z", 4) => Var::Z { m1: MoldId(a), m2: MoldId(b), heater: HeaterId(c), t: d },
            ("w", 1) => Var::W { t: a },
            ("u", 4) => Var::U { m1: MoldId(a), m2: MoldId(b), heater: HeaterId(c), t: d },
            ("prd", 2) => Var::Prd { mold: MoldId(a), t: b },
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Binary,
    /// Integer in `0..=2`.
    Ternary,
    /// Non-negative integer.
    Integer,
}

impl Domain {
    pub fn contains(self, v: i64) -> bool {
        match self {
            Domain::Binary => (0..=1).contains(&v),
            Domain::Ternary => (0..=2).contains(&v),
            Domain::Integer => v >= 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Variable {
    pub var: Var,
    pub domain: Domain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Sense::Le => lhs <= rhs,
            Sense::Ge => lhs >= rhs,
            Sense::Eq => lhs == rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

/// Constraint families, one per row type of the formulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// `w_t <= w_{t-1}`
    Prefix,
    /// `w_t` switches on when any heater is used.
    Active,
    /// At most one configuration per heater and period.
    HeaterLoad,
    /// Capacity of a single-mold configuration.
    CapacitySingle,
    /// Capacity of a mixed pair.
    CapacityMixed,
    /// Capacity of an identical pair.
    CapacityIdentical,
    /// Production only on a selected configuration.
    Coupling,
    /// Per-mold production of a period.
    Production,
    Demand,
    /// Mold copies loaded on a heater.
    Loaded,
    MoldCopies,
    Parts,
    Init,
    Setup,
    Removal,
}

impl Family {
    /// Short tag used in LP comments.
    pub fn tag(self) -> &'static str {
        match self {
            Family::Prefix => "eq-2",
            Family::Active => "eq-3",
            Family::HeaterLoad => "eq-4",
            Family::CapacitySingle => "eq-5",
            Family::CapacityMixed => "eq-6",
            Family::CapacityIdentical => "eq-6bis",
            Family::Coupling => "eq-7",
            Family::Production => "eq-8",
            Family::Demand => "eq-9",
            Family::Loaded => "eq-10",
            Family::MoldCopies => "eq-11",
            Family::Parts => "eq-12",
            Family::Init => "eq-13",
            Family::Setup => "eq-14",
            Family::Removal => "eq-15",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub family: Family,
    /// Human-readable context, e.g. `demand mold 3`.
    pub label: String,
    /// `(variable index, coefficient)`, no repeated index.
    pub terms: Vec<(usize, i64)>,
    pub sense: Sense,
    pub rhs: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MilpModel {
    pub name: String,
    pub thb: u32,
    pub parts_mode: PartsMode,
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    /// Minimized; every coefficient is one.
    pub objective: Vec<usize>,
    index: BTreeMap<Var, usize>,
}

impl MilpModel {
    pub fn var_index(&self, v: &Var) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn var(&self, ix: usize) -> Var {
        self.variables[ix].var
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ModelStats {
    pub n_constraints: usize,
    /// `z` and `w`.
    pub n_binary_vars: usize,
    /// General integers `u` and `prd`, listed as real variables in result
    /// tables.
    pub n_integer_vars: usize,
    /// `x`, `y` and `yp`, each in `0..=2`.
    pub n_ternary_vars: usize,
    pub thb: u32,
}

pub fn model_stats(m: &MilpModel) -> ModelStats {
    let mut s = ModelStats { n_constraints: m.constraints.len(), thb: m.thb, ..ModelStats::default() };
    for v in &m.variables {
        match v.var {
            Var::Z { .. } | Var::W { .. } => s.n_binary_vars += 1,
            Var::U { .. } | Var::Prd { .. } => s.n_integer_vars += 1,
            Var::X { .. } | Var::Y { .. } | Var::Yp { .. } => s.n_ternary_vars += 1,
        }
    }
    s
}

struct Builder {
    variables: Vec<Variable>,
    index: BTreeMap<Var, usize>,
    constraints: Vec<Constraint>,
}

impl Builder {
    fn add_var(&mut self, var: Var, domain: Domain) {
        let ix = self.variables.len();
        if self.index.insert(var, ix).is_none() {
            self.variables.push(Variable { var, domain });
        }
    }

    fn ix(&self, var: Var) -> usize {
        self.index[&var]
    }

    /// Adds a row, merging repeated variables; rows left without terms are
    /// dropped.
    fn row(&mut self, family: Family, label: String, terms: &[(Var, i64)], sense: Sense, rhs: i64) {
        let mut merged: Vec<(usize, i64)> = Vec::with_capacity(terms.len());
        for &(v, c) in terms {
            let ix = self.ix(v);
            match merged.iter_mut().find(|(i, _)| *i == ix) {
                Some(e) => e.1 += c,
                None => merged.push((ix, c)),
            }
        }
        merged.retain(|&(_, c)| c != 0);
        if !merged.is_empty() {
            self.constraints.push(Constraint { family, label, terms: merged, sense, rhs });
        }
    }
}

/// Builds the model for horizon `thb`. Rows whose left-hand side would be
/// empty (e.g. demand rows when `thb = 0`) are omitted.
pub fn build_model(inst: &Instance, thb: u32, parts_mode: PartsMode) -> MilpModel {
    let aux = derive_aux_sets(inst);
    let molds: Vec<MoldId> = inst.molds().iter().map(|m| m.id).collect();
    let heaters = inst.heaters();
    let periods = 1..=thb;
    let phi = inst.phi() as i64;
    let mut b = Builder { variables: Vec::new(), index: BTreeMap::new(), constraints: Vec::new() };

    for &mold in &molds {
        for &heater in heaters {
            for t in 0..=thb {
                b.add_var(Var::X { mold, heater, t }, Domain::Ternary);
            }
        }
    }
    for &mold in &molds {
        for &heater in heaters {
            for t in periods.clone() {
                b.add_var(Var::Y { mold, heater, t }, Domain::Ternary);
            }
        }
    }
    for &mold in &molds {
        for &heater in heaters {
            for t in periods.clone() {
                b.add_var(Var::Yp { mold, heater, t }, Domain::Ternary);
            }
        }
    }
    for &(m1, m2, heater) in &aux.t_ext {
        for t in periods.clone() {
            b.add_var(Var::Z { m1, m2, heater, t }, Domain::Binary);
        }
    }
    for t in periods.clone() {
        b.add_var(Var::W { t }, Domain::Binary);
    }
    for &(m1, m2, heater) in &aux.t_ext {
        for t in periods.clone() {
            b.add_var(Var::U { m1, m2, heater, t }, Domain::Integer);
        }
    }
    for &mold in &molds {
        for t in periods.clone() {
            b.add_var(Var::Prd { mold, t }, Domain::Integer);
        }
    }

    for t in periods.clone().skip(1) {
        b.row(
            Family::Prefix,
            format!("prefix period {t}"),
            &[(Var::W { t }, 1), (Var::W { t: t - 1 }, -1)],
            Sense::Le,
            0,
        );
    }

    for t in periods.clone() {
        let mut terms = Vec::with_capacity(aux.t_ext.len() + 1);
        terms.push((Var::W { t }, 2 * heaters.len() as i64));
        for &(m1, m2, heater) in &aux.t_ext {
            terms.push((Var::Z { m1, m2, heater, t }, -1));
        }
        b.row(Family::Active, format!("active period {t}"), &terms, Sense::Ge, 0);
    }

    for (&heater, pairs) in &aux.h_ext {
        for t in periods.clone() {
            let terms: Vec<_> = pairs
                .iter()
                .map(|&(m1, m2)| (Var::Z { m1, m2, heater, t }, 1))
                .collect();
            b.row(Family::HeaterLoad, format!("heater {heater} period {t}"), &terms, Sense::Le, 1);
        }
    }

    for &(m1, m2, heater) in &aux.t_ext {
        let k = inst.heater_ix(heater).expect("aux heater");
        let cfg = inst.config_of(m1, m2).expect("aux molds");
        let tv = inst.config_tv(cfg, k).expect("aux pair is hostable") as i64;
        let family = if !cfg.is_two_mold() {
            Family::CapacitySingle
        } else if cfg.is_identical() {
            Family::CapacityIdentical
        } else {
            Family::CapacityMixed
        };
        for t in periods.clone() {
            let u = Var::U { m1, m2, heater, t };
            let mut terms = Vec::with_capacity(2 + molds.len());
            terms.push((u, tv));
            for (m, _) in cfg.molds() {
                let mold = inst.mold_id(m);
                terms.push((Var::Y { mold, heater, t }, inst.mold(m).tc as i64));
            }
            for m in inst.molds() {
                terms.push((Var::Yp { mold: m.id, heater, t }, m.tq as i64));
            }
            b.row(
                family,
                format!("capacity {m1} {m2} heater {heater} period {t}"),
                &terms,
                Sense::Le,
                phi,
            );
            b.row(
                Family::Coupling,
                format!("coupling {m1} {m2} heater {heater} period {t}"),
                &[(u, 1), (Var::Z { m1, m2, heater, t }, -(phi / tv))],
                Sense::Le,
                0,
            );
        }
    }

    for &mold in &molds {
        for t in periods.clone() {
            let mut terms = vec_with(Var::Prd { mold, t }, 1);
            for &(j, heater) in &aux.t_of[&mold] {
                terms.push((Var::U { m1: mold, m2: j, heater, t }, -1));
            }
            for &(j, heater) in &aux.t_ext_rev[&mold] {
                terms.push((Var::U { m1: j, m2: mold, heater, t }, -1));
            }
            b.row(Family::Production, format!("production mold {mold} period {t}"), &terms, Sense::Eq, 0);
        }
    }

    for m in inst.molds() {
        let terms: Vec<_> = periods.clone().map(|t| (Var::Prd { mold: m.id, t }, 1)).collect();
        b.row(Family::Demand, format!("demand mold {}", m.id), &terms, Sense::Ge, m.demand as i64);
    }

    for &mold in &molds {
        for &heater in heaters {
            for t in periods.clone() {
                let mut terms = vec_with(Var::X { mold, heater, t }, 1);
                for &(j, k) in &aux.t_of[&mold] {
                    if k == heater {
                        terms.push((Var::Z { m1: mold, m2: j, heater, t }, -1));
                    }
                }
                for &(j, k) in &aux.t_ext_rev[&mold] {
                    if k == heater {
                        terms.push((Var::Z { m1: j, m2: mold, heater, t }, -1));
                    }
                }
                b.row(
                    Family::Loaded,
                    format!("loaded mold {mold} heater {heater} period {t}"),
                    &terms,
                    Sense::Eq,
                    0,
                );
            }
        }
    }

    for (i, m) in inst.molds().iter().enumerate() {
        let compatible: Vec<HeaterId> = inst.compatible_heaters(i).map(|k| heaters[k]).collect();
        for t in periods.clone() {
            let terms: Vec<_> = compatible
                .iter()
                .map(|&heater| (Var::X { mold: m.id, heater, t }, 1))
                .collect();
            b.row(
                Family::MoldCopies,
                format!("copies mold {} period {t}", m.id),
                &terms,
                Sense::Le,
                m.nm as i64,
            );
        }
    }

    for (part, members) in &aux.pc {
        let np = inst
            .parts()
            .iter()
            .find(|p| p.id == *part)
            .map_or(0, |p| p.np as i64);
        for t in periods.clone() {
            match parts_mode {
                PartsMode::PerHeater => {
                    for &heater in heaters {
                        let terms: Vec<_> =
                            members.iter().map(|&mold| (Var::X { mold, heater, t }, 1)).collect();
                        b.row(
                            Family::Parts,
                            format!("part {part} heater {heater} period {t}"),
                            &terms,
                            Sense::Le,
                            np,
                        );
                    }
                }
                PartsMode::Global => {
                    let terms: Vec<_> = heaters
                        .iter()
                        .flat_map(|&heater| members.iter().map(move |&mold| (Var::X { mold, heater, t }, 1)))
                        .collect();
                    b.row(Family::Parts, format!("part {part} period {t}"), &terms, Sense::Le, np);
                }
            }
        }
    }

    for (i, &mold) in molds.iter().enumerate() {
        for (k, &heater) in heaters.iter().enumerate() {
            b.row(
                Family::Init,
                format!("init mold {mold} heater {heater}"),
                &[(Var::X { mold, heater, t: 0 }, 1)],
                Sense::Eq,
                inst.init_count(k, i) as i64,
            );
        }
    }

    for &mold in &molds {
        for &heater in heaters {
            for t in periods.clone() {
                let (now, before) = (Var::X { mold, heater, t }, Var::X { mold, heater, t: t - 1 });
                b.row(
                    Family::Setup,
                    format!("setup mold {mold} heater {heater} period {t}"),
                    &[(Var::Y { mold, heater, t }, 1), (now, -1), (before, 1)],
                    Sense::Ge,
                    0,
                );
                b.row(
                    Family::Removal,
                    format!("removal mold {mold} heater {heater} period {t}"),
                    &[(Var::Yp { mold, heater, t }, 1), (before, -1), (now, 1)],
                    Sense::Ge,
                    0,
                );
            }
        }
    }

    let objective = periods.map(|t| b.ix(Var::W { t })).collect();
    MilpModel {
        name: String::from(inst.name()),
        thb,
        parts_mode,
        variables: b.variables,
        constraints: b.constraints,
        objective,
        index: b.index,
    }
}

fn vec_with(v: Var, c: i64) -> Vec<(Var, i64)> {
    let mut out = Vec::with_capacity(8);
    out.push((v, c));
    out
}
