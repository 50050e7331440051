use alloc::vec::Vec;

use rand::Rng;

use crate::domain::{Config, Instance, MoldId};
use crate::error::Error;

/// A batch of a mold pair with its quantity, not yet placed on a heater.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PendingTuple {
    pub id: u32,
    pub m1: MoldId,
    pub m2: MoldId,
    pub q: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PartialSolution {
    pub tuples: Vec<PendingTuple>,
}

impl PartialSolution {
    /// Tires of `mold` the batches produce, identical pairs counting twice.
    pub fn production_of(&self, mold: MoldId) -> u64 {
        self.tuples
            .iter()
            .map(|t| ((t.m1 == mold) as u64 + (t.m2 == mold) as u64) * t.q as u64)
            .sum()
    }
}

/// `ceil(dm / nm)`; `None` stands for an unbounded batch (no copies).
pub fn batch_size(inst: &Instance, mold: usize) -> Option<u32> {
    let m = inst.mold(mold);
    (m.nm > 0).then(|| m.demand.div_ceil(m.nm))
}

/// Pairs that can ever be drawn: hostable on some heater and within the
/// mold-copy and part limits on their own.
pub(crate) fn admissible_pairs(inst: &Instance) -> Vec<Config> {
    inst.mold_pairs()
        .into_iter()
        .filter(|&c| inst.config_self_sufficient(c))
        .filter(|&c| (0..inst.n_heaters()).any(|k| inst.can_host(c, k)))
        .collect()
}

/// Draws random admissible pairs until every demand is covered.
///
/// A pair is drawn uniformly among admissible pairs whose non-empty molds
/// all have positive residual demand. Its quantity is the smallest of the
/// members' batch sizes and residual demands.
pub fn mold_pairs_procedure<R: Rng + ?Sized>(
    inst: &Instance,
    rng: &mut R,
) -> Result<PartialSolution, Error> {
    let n = inst.n_molds();
    let mut residual: Vec<i64> = inst.molds().iter().map(|m| m.demand as i64).collect();
    let batch: Vec<Option<u32>> = (0..n).map(|m| batch_size(inst, m)).collect();
    let pairs = admissible_pairs(inst);
    let mut solution = PartialSolution::default();
    let mut next_id = 1;
    let mut open = Vec::with_capacity(pairs.len());
    while let Some(pending) = residual.iter().position(|&r| r > 0) {
        open.clear();
        open.extend(pairs.iter().copied().filter(|c| c.slots().all(|m| residual[m] > 0)));
        if open.is_empty() {
            return Err(Error::UnproduciblePair(inst.mold_id(pending)));
        }
        let cfg = open[rng.random_range(0..open.len())];
        let q = cfg
            .slots()
            .flat_map(|m| [batch[m].map(|b| b as i64), Some(residual[m])])
            .flatten()
            .min()
            .expect("pair has a mold") as u32;
        for m in cfg.slots() {
            residual[m] -= q as i64;
        }
        let (m1, m2) = inst.config_ids(cfg);
        solution.tuples.push(PendingTuple { id: next_id, m1, m2, q });
        next_id += 1;
    }
    Ok(solution)
}
