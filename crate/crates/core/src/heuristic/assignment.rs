use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::domain::{periods_needed, AssignmentTuple, Config, Instance, PartsMode, Schedule};
use crate::error::Error;

use super::pairing::PartialSolution;

/// Placement of a batch on one heater.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Slot {
    pub start: u32,
    pub length: u32,
    pub heater: usize,
    /// Setup plus removal time paid in the first period.
    pub overhead: u32,
}

/// Resource reservations of a schedule under construction. Batches are
/// appended at the end of a heater's queue.
pub(crate) struct Timeline<'a> {
    inst: &'a Instance,
    mode: PartsMode,
    heater_end: Vec<u32>,
    heater_last: Vec<Config>,
    mold_use: Vec<Vec<u32>>,
    part_use: Vec<Vec<u32>>,
    busy_until: u32,
}

impl<'a> Timeline<'a> {
    pub fn new(inst: &'a Instance, mode: PartsMode) -> Self {
        Timeline {
            inst,
            mode,
            heater_end: vec![0; inst.n_heaters()],
            heater_last: (0..inst.n_heaters()).map(|k| inst.init_config(k)).collect(),
            mold_use: vec![Vec::new(); inst.n_molds()],
            part_use: vec![Vec::new(); inst.parts().len()],
            busy_until: 0,
        }
    }

    /// First period in `[start, start + length)` where `cfg` would exceed
    /// mold copies or (global mode) parts.
    fn conflict(&self, cfg: Config, start: u32, length: u32) -> Option<u32> {
        let end = (start + length).min(self.busy_until);
        for p in start..end {
            let pi = p as usize;
            for (m, c) in cfg.molds() {
                if self.mold_use[m][pi] + c > self.inst.mold(m).nm {
                    return Some(p);
                }
            }
            if self.mode == PartsMode::Global {
                for (q, part) in self.inst.parts().iter().enumerate() {
                    let need = self.inst.part_need(cfg, q);
                    if need > 0 && self.part_use[q][pi] + need > part.np {
                        return Some(p);
                    }
                }
            }
        }
        None
    }

    /// Earliest feasible start of `q` units per slot of `cfg` on `heater`.
    pub fn earliest_on(&self, cfg: Config, q: u32, heater: usize) -> Option<Slot> {
        let inst = self.inst;
        if !inst.can_host(cfg, heater) || !inst.config_self_sufficient(cfg) {
            return None;
        }
        let steady = inst.steady_capacity(cfg, heater)?;
        let end = self.heater_end[heater];
        let prev = self.heater_last[heater];
        if let Some(first) = inst.period_capacity(prev, cfg, heater) {
            let length = periods_needed(q, first, steady)?;
            if self.conflict(cfg, end, length).is_none() {
                let overhead = inst.transition_overhead(prev, cfg);
                return Some(Slot { start: end, length, heater, overhead });
            }
        }
        let first = inst.period_capacity(Config::EMPTY, cfg, heater)?;
        let length = periods_needed(q, first, steady)?;
        let overhead = inst.transition_overhead(Config::EMPTY, cfg);
        let mut start = end + 1;
        loop {
            match self.conflict(cfg, start, length) {
                None => return Some(Slot { start, length, heater, overhead }),
                Some(p) => start = p + 1,
            }
        }
    }

    /// Earliest start over all heaters; ties go to the heater with the least
    /// setup and removal time, then to the lowest heater id.
    pub fn earliest(&self, cfg: Config, q: u32) -> Option<Slot> {
        (0..self.inst.n_heaters())
            .filter_map(|k| self.earliest_on(cfg, q, k))
            .min_by_key(|s| (s.start, s.overhead, s.heater))
    }

    pub fn commit(&mut self, cfg: Config, slot: Slot) {
        let end = slot.start + slot.length;
        if end > self.busy_until {
            let len = end as usize;
            for u in self.mold_use.iter_mut().chain(self.part_use.iter_mut()) {
                u.resize(len, 0);
            }
            self.busy_until = end;
        }
        for p in slot.start..end {
            for (m, c) in cfg.molds() {
                self.mold_use[m][p as usize] += c;
            }
            if self.mode == PartsMode::Global {
                for q in 0..self.inst.parts().len() {
                    self.part_use[q][p as usize] += self.inst.part_need(cfg, q);
                }
            }
        }
        self.heater_end[slot.heater] = end;
        self.heater_last[slot.heater] = cfg;
    }
}

/// Batch awaiting placement, in dense form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Batch {
    pub id: u32,
    pub cfg: Config,
    pub q: u32,
}

/// Places batches one at a time: the batch with the earliest feasible start
/// goes first (lowest id on ties), on the heater chosen by
/// [`Timeline::earliest`].
pub(crate) fn assign(inst: &Instance, batches: &[Batch], mode: PartsMode) -> Result<Schedule, Error> {
    let mut pending: Vec<Batch> = batches.to_vec();
    pending.sort_by_key(|b| b.id);
    let mut timeline = Timeline::new(inst, mode);
    let mut tuples = Vec::with_capacity(pending.len());
    let mut cache: BTreeMap<(Config, u32), Option<Slot>> = BTreeMap::new();
    while !pending.is_empty() {
        cache.clear();
        let mut best: Option<(usize, Slot)> = None;
        for (ix, b) in pending.iter().enumerate() {
            let slot = *cache
                .entry((b.cfg, b.q))
                .or_insert_with(|| timeline.earliest(b.cfg, b.q));
            let Some(slot) = slot else {
                return Err(Error::NoFeasiblePlacement(b.id));
            };
            if best.is_none_or(|(_, s)| slot.start < s.start) {
                best = Some((ix, slot));
            }
        }
        let (ix, slot) = best.expect("pending is non-empty");
        let b = pending.remove(ix);
        timeline.commit(b.cfg, slot);
        let (m1, m2) = inst.config_ids(b.cfg);
        tuples.push(AssignmentTuple {
            id: b.id,
            m1,
            m2,
            q: b.q,
            heater: inst.heaters()[slot.heater],
            start: slot.start,
            length: slot.length,
        });
    }
    Ok(Schedule::new(tuples))
}

/// Gives every batch of `partial` a heater, start period and length.
pub fn assignment_procedure(
    inst: &Instance,
    partial: &PartialSolution,
    mode: PartsMode,
) -> Result<Schedule, Error> {
    let batches = partial
        .tuples
        .iter()
        .map(|t| {
            inst.config_of(t.m1, t.m2)
                .filter(|&cfg| inst.is_mold_pair(cfg))
                .map(|cfg| Batch { id: t.id, cfg, q: t.q })
                .ok_or(Error::NoFeasiblePlacement(t.id))
        })
        .collect::<Result<Vec<_>, _>>()?;
    assign(inst, &batches, mode)
}
