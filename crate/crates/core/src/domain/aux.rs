use alloc::collections::{BTreeMap, BTreeSet};

use super::instance::{HeaterId, Instance, MoldId, PartId};

/// Index sets derived from an instance, keyed by ids.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AuxSets {
    /// `(i, j, k)`: compatible molds `i <= j` that heater `k` can run together.
    pub t: BTreeSet<(MoldId, MoldId, HeaterId)>,
    /// `T` plus `(0, j, k)` for every compatible mold-heater pair.
    pub t_ext: BTreeSet<(MoldId, MoldId, HeaterId)>,
    /// `T_i = {(j, k) | (i, j, k) in T}` for every mold.
    pub t_of: BTreeMap<MoldId, BTreeSet<(MoldId, HeaterId)>>,
    /// `TExt'_i = {(j, k) | (j, i, k) in TExt}` for every mold.
    pub t_ext_rev: BTreeMap<MoldId, BTreeSet<(MoldId, HeaterId)>>,
    /// `HExt_k = {(i, j) | (i, j, k) in TExt}` for every heater.
    pub h_ext: BTreeMap<HeaterId, BTreeSet<(MoldId, MoldId)>>,
    /// `PC_q`: molds requiring part `q`.
    pub pc: BTreeMap<PartId, BTreeSet<MoldId>>,
}

pub fn derive_aux_sets(inst: &Instance) -> AuxSets {
    let mut aux = AuxSets::default();
    for m in inst.molds() {
        aux.t_of.insert(m.id, BTreeSet::new());
        aux.t_ext_rev.insert(m.id, BTreeSet::new());
    }
    for &h in inst.heaters() {
        aux.h_ext.insert(h, BTreeSet::new());
    }
    for k in 0..inst.n_heaters() {
        let hk = inst.heaters()[k];
        for cfg in inst.heater_pairs(k) {
            let (i, j) = inst.config_ids(cfg);
            if !i.is_empty() {
                aux.t.insert((i, j, hk));
                aux.t_of.get_mut(&i).expect("mold listed").insert((j, hk));
            }
            aux.t_ext.insert((i, j, hk));
            aux.t_ext_rev.get_mut(&j).expect("mold listed").insert((i, hk));
            aux.h_ext.get_mut(&hk).expect("heater listed").insert((i, j));
        }
    }
    for p in inst.parts() {
        aux.pc
            .insert(p.id, p.molds.iter().map(|&m| inst.mold_id(m)).collect());
    }
    aux
}
