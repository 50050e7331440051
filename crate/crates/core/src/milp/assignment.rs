use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::domain::{AssignmentTuple, Config, Instance, Schedule};
use crate::error::Error;

use super::{MilpModel, Var};

/// Variable values of a solution; missing variables are zero.
pub type Assignment = BTreeMap<Var, i64>;

fn value(a: &Assignment, v: &Var) -> i64 {
    a.get(v).copied().unwrap_or(0)
}

/// Lists every domain and row violation of `a`; unknown variables are an
/// error of their own.
pub fn check_assignment(m: &MilpModel, a: &Assignment) -> Result<(), Error> {
    if let Some(v) = a.keys().find(|v| m.var_index(v).is_none()) {
        return Err(Error::UnknownVariable(format!("{v}")));
    }
    let values: Vec<i64> = m.variables.iter().map(|v| value(a, &v.var)).collect();
    let mut bad: Vec<String> = Vec::new();
    for (v, &x) in m.variables.iter().zip(&values) {
        if !v.domain.contains(x) {
            bad.push(format!("{} = {x} outside {:?}", v.var, v.domain));
        }
    }
    for (n, c) in m.constraints.iter().enumerate() {
        let lhs: i64 = c.terms.iter().map(|&(i, k)| k * values[i]).sum();
        if !c.sense.holds(lhs, c.rhs) {
            bad.push(format!(
                "c{} ({} {}): {lhs} {} {}",
                n + 1,
                c.family.tag(),
                c.label,
                c.sense.symbol(),
                c.rhs
            ));
        }
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::InfeasibleAssignment(bad))
    }
}

/// Translates a schedule into variable values of `m`.
///
/// Each tuple produces at capacity in its first periods and the remainder
/// last; setups, removals and `w` take their smallest feasible values.
pub fn encode_schedule(inst: &Instance, m: &MilpModel, s: &Schedule) -> Result<Assignment, Error> {
    let makespan = s.makespan();
    if makespan > m.thb {
        return Err(Error::HorizonTooShort { thb: m.thb, makespan });
    }
    let n_h = inst.n_heaters();
    let mut grid = vec![vec![Config::EMPTY; m.thb as usize + 1]; n_h];
    for (k, row) in grid.iter_mut().enumerate() {
        row[0] = inst.init_config(k);
    }
    let mut a = Assignment::new();
    let set = |a: &mut Assignment, v: Var, x: i64| {
        if x != 0 {
            *a.entry(v).or_insert(0) += x;
        }
    };
    let mut tuples = s.tuples.clone();
    tuples.sort_by_key(|t| (t.heater, t.start));
    for t in &tuples {
        let (Some(cfg), Some(k)) = (inst.config_of(t.m1, t.m2), inst.heater_ix(t.heater)) else {
            return Err(Error::InfeasibleAssignment(vec![format!("tuple {}: unknown mold or heater", t.id)]));
        };
        let (m1, m2) = inst.config_ids(cfg);
        let heater = t.heater;
        let mut left = t.q;
        for p in t.start..t.end() {
            let tt = p + 1;
            let prev = grid[k][p as usize];
            let cap = inst.period_capacity(prev, cfg, k).unwrap_or(0);
            let u = left.min(cap);
            left -= u;
            grid[k][tt as usize] = cfg;
            set(&mut a, Var::Z { m1, m2, heater, t: tt }, 1);
            set(&mut a, Var::U { m1, m2, heater, t: tt }, u as i64);
            for mold in cfg.slots() {
                set(&mut a, Var::Prd { mold: inst.mold_id(mold), t: tt }, u as i64);
            }
        }
    }
    for (k, row) in grid.iter().enumerate() {
        let heater = inst.heaters()[k];
        for (p, &cfg) in row.iter().enumerate() {
            let t = p as u32;
            for i in 0..inst.n_molds() {
                let mold = inst.mold_id(i);
                let now = cfg.count(i) as i64;
                set(&mut a, Var::X { mold, heater, t }, now);
                if p > 0 {
                    let before = row[p - 1].count(i) as i64;
                    set(&mut a, Var::Y { mold, heater, t }, (now - before).max(0));
                    set(&mut a, Var::Yp { mold, heater, t }, (before - now).max(0));
                }
            }
        }
    }
    for t in 1..=makespan {
        set(&mut a, Var::W { t }, 1);
    }
    Ok(a)
}

/// Decodes a checked assignment into a schedule. Consecutive periods with the
/// same configuration on a heater form one tuple whose quantity is the sum
/// of its `u` values; tuples are numbered by heater then start.
pub fn extract_schedule(inst: &Instance, m: &MilpModel, a: &Assignment) -> Result<Schedule, Error> {
    check_assignment(m, a)?;
    let mut active: BTreeMap<(usize, u32), (Config, u32)> = BTreeMap::new();
    for (v, &x) in a {
        if let Var::Z { m1, m2, heater, t } = *v {
            if x == 1 {
                let k = inst.heater_ix(heater).ok_or_else(|| Error::UnknownVariable(format!("{v}")))?;
                let cfg = inst.config_of(m1, m2).ok_or_else(|| Error::UnknownVariable(format!("{v}")))?;
                let u = value(a, &Var::U { m1, m2, heater, t }) as u32;
                active.insert((k, t), (cfg, u));
            }
        }
    }
    let mut tuples: Vec<AssignmentTuple> = Vec::new();
    let mut open: Option<(usize, u32, Config)> = None;
    for (&(k, t), &(cfg, u)) in &active {
        let extends = matches!(open, Some((ok, end, oc)) if ok == k && end == t && oc == cfg);
        if extends {
            let last = tuples.last_mut().expect("open tuple exists");
            last.q += u;
            last.length += 1;
        } else {
            let (m1, m2) = inst.config_ids(cfg);
            tuples.push(AssignmentTuple {
                id: tuples.len() as u32 + 1,
                m1,
                m2,
                q: u,
                heater: inst.heaters()[k],
                start: t - 1,
                length: 1,
            });
        }
        open = Some((k, t + 1, cfg));
    }
    Ok(Schedule::new(tuples))
}
