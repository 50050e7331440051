//! Closed-form planning horizon that admits a feasible schedule.
//!
//! Molds are split into those that can run as an identical pair without
//! parts (`x`) and the rest (`y`). Each mold then contributes the periods
//! needed to cure its demand alone on its slowest compatible heater, with
//! setup and removal charged as lost curing slots:
//!
//! ```text
//! x: ceil((4 ceil(tc/tv) + 4 ceil(tq/tv) + dm) / (2 floor(phi/tv)))
//! y: ceil((  ceil(tc/tv) +   ceil(tq/tv) + dm) / (  floor(phi/tv)))
//! ```

use alloc::collections::{BTreeMap, BTreeSet};

use crate::domain::{Instance, MoldId};
use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MoldPartition {
    /// At least two copies, no part required and allowed to run as an
    /// identical pair.
    pub x: BTreeSet<MoldId>,
    /// A single copy, or some part required.
    pub y: BTreeSet<MoldId>,
    /// Slowest curing time over compatible heaters.
    pub tv_max: BTreeMap<MoldId, u32>,
}

/// Splits the demanded molds; molds without demand appear in neither set.
pub fn partition_molds(inst: &Instance) -> Result<MoldPartition, Error> {
    let mut p = MoldPartition::default();
    for (i, m) in inst.molds().iter().enumerate() {
        if m.demand == 0 {
            continue;
        }
        let tv = inst
            .compatible_heaters(i)
            .filter_map(|k| inst.tv(i, k))
            .max()
            .ok_or(Error::NoCompatibleHeater(m.id))?;
        p.tv_max.insert(m.id, tv);
        if m.nm >= 2 && inst.parts_of(i).is_empty() && inst.molds_compatible(i, i) {
            p.x.insert(m.id);
        } else {
            p.y.insert(m.id);
        }
    }
    Ok(p)
}

pub fn compute_thb(inst: &Instance) -> Result<u32, Error> {
    let p = partition_molds(inst)?;
    let phi = inst.phi() as u64;
    let mut total: u64 = 0;
    for (i, m) in inst.molds().iter().enumerate() {
        let Some(&tv) = p.tv_max.get(&m.id) else {
            continue;
        };
        let tv = tv as u64;
        let per_period = phi / tv;
        if tv == 0 || per_period == 0 {
            let heater = inst
                .compatible_heaters(i)
                .max_by_key(|&k| inst.tv(i, k))
                .map(|k| inst.heaters()[k])
                .unwrap_or_default();
            return Err(Error::PeriodTooShort { mold: m.id, heater });
        }
        let setup = (m.tc as u64).div_ceil(tv);
        let removal = (m.tq as u64).div_ceil(tv);
        let dm = m.demand as u64;
        total += if p.x.contains(&m.id) {
            (4 * setup + 4 * removal + dm).div_ceil(2 * per_period)
        } else {
            (setup + removal + dm).div_ceil(per_period)
        };
    }
    u32::try_from(total).map_err(|_| Error::Solver("horizon bound overflows u32".into()))
}
