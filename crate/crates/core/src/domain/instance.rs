use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::Error;

macro_rules! id_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
        #[cfg_attr(feature = "serde", derive(Serialize, Deserialize), serde(transparent))]
        pub struct $name(pub u32);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }

        impl From<u32> for $name {
            fn from(v: u32) -> Self {
                Self(v)
            }
        }
    };
}

id_newtype!(
    /// Mold type identifier. `0` is the reserved empty mold.
    MoldId
);
id_newtype!(HeaterId);
id_newtype!(PartId);

impl MoldId {
    pub const EMPTY: MoldId = MoldId(0);

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

/// How the part-availability constraint counts parts in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize), serde(rename_all = "kebab-case"))]
pub enum PartsMode {
    /// Parts are limited per heater and period.
    #[default]
    PerHeater,
    /// Parts are limited per period across all heaters.
    Global,
}

impl fmt::Display for PartsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartsMode::PerHeater => "per-heater",
            PartsMode::Global => "global",
        })
    }
}

impl core::str::FromStr for PartsMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "per-heater" => Ok(PartsMode::PerHeater),
            "global" => Ok(PartsMode::Global),
            other => Err(format!("unknown parts mode `{other}`")),
        }
    }
}

/// Raw, id-based instance description. Times are in deciminutes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct InstanceSpec {
    pub name: String,
    #[cfg_attr(feature = "serde", serde(rename = "phi_dmin"))]
    pub phi: u32,
    pub molds: Vec<MoldSpec>,
    pub heaters: Vec<HeaterId>,
    #[cfg_attr(feature = "serde", serde(rename = "curing_dmin"))]
    pub curing: Vec<CuringTime>,
    pub mold_compat: Vec<(MoldId, MoldId)>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub parts: Vec<PartSpec>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub init: Vec<InitialLoad>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "BTreeMap::is_empty"))]
    pub meta: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct MoldSpec {
    pub id: MoldId,
    pub nm: u32,
    #[cfg_attr(feature = "serde", serde(rename = "tc_dmin"))]
    pub tc: u32,
    #[cfg_attr(feature = "serde", serde(rename = "tq_dmin"))]
    pub tq: u32,
    pub demand: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct CuringTime {
    pub mold: MoldId,
    pub heater: HeaterId,
    pub tv: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct PartSpec {
    pub id: PartId,
    pub np: u32,
    pub molds: Vec<MoldId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct InitialLoad {
    pub mold: MoldId,
    pub heater: HeaterId,
    pub count: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mold {
    pub id: MoldId,
    pub nm: u32,
    pub tc: u32,
    pub tq: u32,
    pub demand: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Part {
    pub id: PartId,
    pub np: u32,
    /// Dense indices of the molds requiring this part.
    pub molds: Vec<usize>,
}

/// Heater load: an unordered multiset of at most two molds.
///
/// Slots hold dense mold indices shifted by one so that `0` is the empty
/// mold; `lo <= hi` always.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Config {
    lo: u16,
    hi: u16,
}

impl Config {
    pub const EMPTY: Config = Config { lo: 0, hi: 0 };

    pub fn single(mold: usize) -> Self {
        Config { lo: 0, hi: mold as u16 + 1 }
    }

    pub fn pair(a: usize, b: usize) -> Self {
        let (a, b) = (a as u16 + 1, b as u16 + 1);
        Config { lo: a.min(b), hi: a.max(b) }
    }

    /// Builds from optional slots, `None` being the empty mold.
    pub fn from_slots(a: Option<usize>, b: Option<usize>) -> Self {
        let enc = |s: Option<usize>| s.map_or(0, |m| m as u16 + 1);
        let (a, b) = (enc(a), enc(b));
        Config { lo: a.min(b), hi: a.max(b) }
    }

    pub fn is_empty(self) -> bool {
        self.hi == 0
    }

    pub fn is_identical(self) -> bool {
        self.lo != 0 && self.lo == self.hi
    }

    pub fn is_two_mold(self) -> bool {
        self.lo != 0
    }

    /// First slot, `None` when it holds the empty mold.
    pub fn first(self) -> Option<usize> {
        (self.lo != 0).then(|| self.lo as usize - 1)
    }

    pub fn second(self) -> Option<usize> {
        (self.hi != 0).then(|| self.hi as usize - 1)
    }

    /// Occupied slots; an identical pair yields its mold twice.
    pub fn slots(self) -> impl Iterator<Item = usize> {
        [self.lo, self.hi]
            .into_iter()
            .filter(|&s| s != 0)
            .map(|s| s as usize - 1)
    }

    /// Distinct molds with their copy counts.
    pub fn molds(self) -> impl Iterator<Item = (usize, u32)> {
        let first = match (self.lo, self.hi) {
            (0, 0) => None,
            (0, h) => Some((h as usize - 1, 1)),
            (l, h) if l == h => Some((l as usize - 1, 2)),
            (l, _) => Some((l as usize - 1, 1)),
        };
        let second = (self.lo != 0 && self.lo != self.hi).then(|| (self.hi as usize - 1, 1));
        first.into_iter().chain(second)
    }

    pub fn count(self, mold: usize) -> u32 {
        let code = mold as u16 + 1;
        (self.lo == code) as u32 + (self.hi == code) as u32
    }

    pub fn contains(self, mold: usize) -> bool {
        self.count(mold) > 0
    }

    pub fn slot_count(self) -> u32 {
        (self.lo != 0) as u32 + (self.hi != 0) as u32
    }
}

/// Validated-shape instance with dense indices.
///
/// Construction only checks referential integrity; admissibility (positive
/// times, curing fits in a period, ...) is reported by
/// [`validate_instance`](crate::validate_instance).
#[derive(Debug, Clone)]
pub struct Instance {
    spec: InstanceSpec,
    phi: u32,
    molds: Vec<Mold>,
    heaters: Vec<HeaterId>,
    /// `[mold * heaters + heater]`
    curing: Vec<Option<u32>>,
    /// `[mold * molds + mold]`, symmetric.
    compat: Vec<bool>,
    parts: Vec<Part>,
    mold_parts: Vec<Vec<usize>>,
    /// `[heater][mold]` initial copy counts.
    init: Vec<Vec<u32>>,
}

impl Instance {
    pub fn new(spec: InstanceSpec) -> Result<Self, Error> {
        let mut molds: Vec<Mold> = spec
            .molds
            .iter()
            .map(|m| Mold { id: m.id, nm: m.nm, tc: m.tc, tq: m.tq, demand: m.demand })
            .collect();
        molds.sort_by_key(|m| m.id);
        for w in molds.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::Malformed(format!("duplicate mold id {}", w[0].id)));
            }
        }
        if molds.first().is_some_and(|m| m.id.is_empty()) {
            return Err(Error::Malformed("mold id 0 is reserved for the empty mold".into()));
        }
        let mut heaters = spec.heaters.clone();
        heaters.sort();
        let before = heaters.len();
        heaters.dedup();
        if heaters.len() != before {
            return Err(Error::Malformed("duplicate heater id".into()));
        }

        let n_m = molds.len();
        let n_h = heaters.len();
        let mold_ix = |id: MoldId, ctx: &str| -> Result<usize, Error> {
            molds
                .binary_search_by_key(&id, |m| m.id)
                .map_err(|_| Error::Malformed(format!("{ctx}: unknown mold {id}")))
        };
        let heater_ix = |id: HeaterId, ctx: &str| -> Result<usize, Error> {
            heaters
                .binary_search(&id)
                .map_err(|_| Error::Malformed(format!("{ctx}: unknown heater {id}")))
        };

        let mut curing = vec![None; n_m * n_h];
        for c in &spec.curing {
            let i = mold_ix(c.mold, "curing_dmin")?;
            let k = heater_ix(c.heater, "curing_dmin")?;
            if curing[i * n_h + k].replace(c.tv).is_some() {
                return Err(Error::Malformed(format!(
                    "curing_dmin: duplicate entry for mold {} heater {}",
                    c.mold, c.heater
                )));
            }
        }

        let mut compat = vec![false; n_m * n_m];
        for &(a, b) in &spec.mold_compat {
            let i = mold_ix(a, "mold_compat")?;
            let j = mold_ix(b, "mold_compat")?;
            compat[i * n_m + j] = true;
            compat[j * n_m + i] = true;
        }

        let mut parts = Vec::with_capacity(spec.parts.len());
        let mut mold_parts = vec![Vec::new(); n_m];
        let mut part_specs: Vec<&PartSpec> = spec.parts.iter().collect();
        part_specs.sort_by_key(|p| p.id);
        for w in part_specs.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::Malformed(format!("duplicate part id {}", w[0].id)));
            }
        }
        for (q, p) in part_specs.iter().enumerate() {
            let mut ms = p
                .molds
                .iter()
                .map(|&m| mold_ix(m, "parts"))
                .collect::<Result<Vec<_>, _>>()?;
            ms.sort_unstable();
            ms.dedup();
            for &m in &ms {
                mold_parts[m].push(q);
            }
            parts.push(Part { id: p.id, np: p.np, molds: ms });
        }

        let mut init = vec![vec![0u32; n_m]; n_h];
        for l in &spec.init {
            let i = mold_ix(l.mold, "init")?;
            let k = heater_ix(l.heater, "init")?;
            init[k][i] += l.count;
        }

        Ok(Instance {
            phi: spec.phi,
            spec,
            molds,
            heaters,
            curing,
            compat,
            parts,
            mold_parts,
            init,
        })
    }

    pub fn spec(&self) -> &InstanceSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn phi(&self) -> u32 {
        self.phi
    }

    pub fn molds(&self) -> &[Mold] {
        &self.molds
    }

    pub fn mold(&self, ix: usize) -> &Mold {
        &self.molds[ix]
    }

    pub fn n_molds(&self) -> usize {
        self.molds.len()
    }

    pub fn heaters(&self) -> &[HeaterId] {
        &self.heaters
    }

    pub fn n_heaters(&self) -> usize {
        self.heaters.len()
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    /// Dense part indices required by a mold.
    pub fn parts_of(&self, mold: usize) -> &[usize] {
        &self.mold_parts[mold]
    }

    pub fn mold_ix(&self, id: MoldId) -> Option<usize> {
        self.molds.binary_search_by_key(&id, |m| m.id).ok()
    }

    pub fn heater_ix(&self, id: HeaterId) -> Option<usize> {
        self.heaters.binary_search(&id).ok()
    }

    pub fn mold_id(&self, ix: usize) -> MoldId {
        self.molds[ix].id
    }

    pub fn total_demand(&self) -> u64 {
        self.molds.iter().map(|m| m.demand as u64).sum()
    }

    /// Curing time of `mold` on `heater`; `None` when incompatible.
    pub fn tv(&self, mold: usize, heater: usize) -> Option<u32> {
        self.curing[mold * self.heaters.len() + heater]
    }

    pub fn compatible_heaters(&self, mold: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.heaters.len()).filter(move |&k| self.tv(mold, k).is_some())
    }

    /// Membership in the mold-compatibility set (symmetric).
    pub fn molds_compatible(&self, a: usize, b: usize) -> bool {
        self.compat[a * self.molds.len() + b]
    }

    /// Whether `cfg` is a loadable pair: identical and mixed pairs must be in
    /// the compatibility set, single molds always are.
    pub fn is_mold_pair(&self, cfg: Config) -> bool {
        match (cfg.first(), cfg.second()) {
            (_, None) => false,
            (None, Some(_)) => true,
            (Some(a), Some(b)) => self.molds_compatible(a, b),
        }
    }

    /// Whether heater `k` can run configuration `cfg` (membership of the pair
    /// in the heater's extended pair set).
    pub fn can_host(&self, cfg: Config, heater: usize) -> bool {
        self.is_mold_pair(cfg) && cfg.slots().all(|m| self.tv(m, heater).is_some())
    }

    /// Slowest curing time among the loaded molds.
    pub fn config_tv(&self, cfg: Config, heater: usize) -> Option<u32> {
        let mut max = None;
        for m in cfg.slots() {
            let tv = self.tv(m, heater)?;
            max = Some(max.map_or(tv, |x: u32| x.max(tv)));
        }
        max
    }

    /// Setup time for molds entering plus removal time for molds leaving
    /// when a heater goes from `prev` to `next`.
    pub fn transition_overhead(&self, prev: Config, next: Config) -> u32 {
        let mut total = 0;
        for (m, c) in next.molds() {
            total += c.saturating_sub(prev.count(m)) * self.molds[m].tc;
        }
        for (m, c) in prev.molds() {
            total += c.saturating_sub(next.count(m)) * self.molds[m].tq;
        }
        total
    }

    /// Tires cured per loaded slot in one period on `heater` after switching
    /// from `prev` to `next`: `floor((phi - setups - removals) / max tv)`.
    ///
    /// `None` when `next` cannot run on the heater or the switch does not fit
    /// in a period.
    pub fn period_capacity(&self, prev: Config, next: Config, heater: usize) -> Option<u32> {
        if !self.can_host(next, heater) {
            return None;
        }
        let overhead = self.transition_overhead(prev, next);
        let left = self.phi.checked_sub(overhead)?;
        Some(left / self.config_tv(next, heater)?)
    }

    /// Per-slot production of `next` running uninterrupted.
    pub fn steady_capacity(&self, next: Config, heater: usize) -> Option<u32> {
        self.period_capacity(next, next, heater)
    }

    /// Heater load at period zero.
    pub fn init_config(&self, heater: usize) -> Config {
        let mut slots = self.init[heater]
            .iter()
            .enumerate()
            .flat_map(|(m, &c)| core::iter::repeat_n(m, c as usize));
        Config::from_slots(slots.next(), slots.next())
    }

    pub fn init_count(&self, heater: usize, mold: usize) -> u32 {
        self.init[heater][mold]
    }

    /// Number of copies of part `part` a configuration needs.
    pub fn part_need(&self, cfg: Config, part: usize) -> u32 {
        self.parts[part].molds.iter().map(|&m| cfg.count(m)).sum()
    }

    /// Whether a configuration alone respects mold copies and part counts.
    pub fn config_self_sufficient(&self, cfg: Config) -> bool {
        cfg.molds().all(|(m, c)| c <= self.molds[m].nm)
            && (0..self.parts.len()).all(|q| self.part_need(cfg, q) <= self.parts[q].np)
    }

    /// Every pair of the extended compatibility set, in `(lo, hi)` order.
    pub fn mold_pairs(&self) -> Vec<Config> {
        let n = self.molds.len();
        let mut out = Vec::new();
        for j in 0..n {
            out.push(Config::single(j));
        }
        for i in 0..n {
            for j in i..n {
                if self.molds_compatible(i, j) {
                    out.push(Config::pair(i, j));
                }
            }
        }
        out.sort();
        out
    }

    /// Configurations heater `k` can run.
    pub fn heater_pairs(&self, heater: usize) -> Vec<Config> {
        self.mold_pairs()
            .into_iter()
            .filter(|&c| self.can_host(c, heater))
            .collect()
    }

    /// Converts a configuration to mold ids, `(lo, hi)`.
    pub fn config_ids(&self, cfg: Config) -> (MoldId, MoldId) {
        let id = |s: Option<usize>| s.map_or(MoldId::EMPTY, |m| self.molds[m].id);
        (id(cfg.first()), id(cfg.second()))
    }

    /// Converts an id pair to a configuration; `None` for unknown ids.
    pub fn config_of(&self, a: MoldId, b: MoldId) -> Option<Config> {
        let ix = |id: MoldId| -> Option<Option<usize>> {
            if id.is_empty() {
                Some(None)
            } else {
                self.mold_ix(id).map(Some)
            }
        };
        Some(Config::from_slots(ix(a)?, ix(b)?))
    }

}

/// Smallest number of periods whose cumulative capacity covers `q` when the
/// first period yields `first` and every later one `steady` per slot.
pub fn periods_needed(q: u32, first: u32, steady: u32) -> Option<u32> {
    if q <= first {
        return Some(1);
    }
    if steady == 0 {
        return None;
    }
    let rest = q - first;
    Some(1 + rest.div_ceil(steady))
}
