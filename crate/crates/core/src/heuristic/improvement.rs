use alloc::vec::Vec;

use crate::domain::{periods_needed, Config, Instance, PartsMode, Schedule};
use crate::error::Error;

use super::assignment::{assign, Batch};

/// Splits every two-mold batch. Identical pairs become two identical pairs
/// of `ceil(q/2)` and `floor(q/2)`; a mixed pair becomes one single-mold
/// batch per mold, each keeping `q` so that production is unchanged. New
/// batches take ids after the largest existing one; empty halves are
/// dropped.
pub(crate) fn split_batches(inst: &Instance, s: &Schedule) -> Vec<Batch> {
    let mut next = s.last_id();
    let mut out = Vec::with_capacity(s.tuples.len() * 2);
    let mut sorted = s.tuples.clone();
    sorted.sort_by_key(|t| t.id);
    for t in &sorted {
        let cfg = inst.config_of(t.m1, t.m2).expect("schedule refers to known molds");
        if !cfg.is_two_mold() {
            out.push(Batch { id: t.id, cfg, q: t.q });
            continue;
        }
        let halves = if cfg.is_identical() {
            [(cfg, t.q.div_ceil(2)), (cfg, t.q / 2)]
        } else {
            [
                (Config::from_slots(None, cfg.first()), t.q),
                (Config::from_slots(None, cfg.second()), t.q),
            ]
        };
        for (cfg, q) in halves {
            next += 1;
            if q > 0 {
                out.push(Batch { id: next, cfg, q });
            }
        }
    }
    out
}

/// Shrinks the last batch of every heater by the overproduction it causes,
/// keeping at least one unit, and shortens it accordingly.
pub fn try_reduce_production(inst: &Instance, s: &mut Schedule) {
    let mut surplus: Vec<i64> = inst
        .molds()
        .iter()
        .map(|m| s.production_of(m.id) as i64 - m.demand as i64)
        .collect();
    for (k, &h) in inst.heaters().iter().enumerate() {
        let Some(last) = s
            .tuples
            .iter()
            .enumerate()
            .filter(|(_, t)| t.heater == h)
            .max_by_key(|(_, t)| t.start)
            .map(|(i, _)| i)
        else {
            continue;
        };
        let t = s.tuples[last];
        let cfg = inst.config_of(t.m1, t.m2).expect("schedule refers to known molds");
        let cut = match (cfg.first(), cfg.second()) {
            (Some(a), Some(b)) if a == b => surplus[a] / 2,
            (Some(a), Some(b)) => surplus[a].min(surplus[b]),
            (None, Some(b)) => surplus[b],
            _ => 0,
        };
        let q = (t.q as i64 - cut.max(0)).max(1) as u32;
        if q == t.q {
            continue;
        }
        let prev = if t.start == 0 {
            inst.init_config(k)
        } else {
            s.tuples
                .iter()
                .find(|o| o.heater == h && o.end() == t.start)
                .and_then(|o| inst.config_of(o.m1, o.m2))
                .unwrap_or(Config::EMPTY)
        };
        let first = inst.period_capacity(prev, cfg, k).unwrap_or(0);
        let steady = inst.steady_capacity(cfg, k).unwrap_or(0);
        let length = periods_needed(q, first, steady).unwrap_or(t.length).min(t.length);
        for m in cfg.slots() {
            surplus[m] -= (t.q - q) as i64;
        }
        let t = &mut s.tuples[last];
        t.q = q;
        t.length = length;
    }
}

/// Repeatedly splits batches, reassigns them and trims overproduction while
/// the makespan strictly decreases.
pub fn improvement_procedure(
    inst: &Instance,
    s: &Schedule,
    mode: PartsMode,
) -> Result<Schedule, Error> {
    let mut best = s.clone();
    loop {
        let batches = split_batches(inst, &best);
        let mut candidate = assign(inst, &batches, mode)?;
        try_reduce_production(inst, &mut candidate);
        if candidate.makespan() < best.makespan() {
            best = candidate;
        } else {
            return Ok(best);
        }
    }
}
