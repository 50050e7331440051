//! Random instance generation: the three benchmark scenarios and a tiny
//! family small enough for exhaustive search.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{
    CuringTime, HeaterId, InitialLoad, Instance, InstanceSpec, MoldId, MoldSpec, PartId, PartSpec,
};
use crate::error::Error;

pub const PHI: u32 = 14_400;
pub const TC_POOL: [u32; 3] = [416, 606, 668];
pub const TQ_POOL: [u32; 3] = [252, 449, 622];
pub const TV_POOL: [u32; 8] = [125, 180, 260, 300, 400, 420, 530, 550];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scenario {
    Small,
    Medium,
    Large,
}

impl Scenario {
    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::Small => "small",
            Scenario::Medium => "medium",
            Scenario::Large => "large",
        }
    }

    /// Iteration count used for this scenario's instances.
    pub fn iterations(self) -> u32 {
        match self {
            Scenario::Small => 100,
            Scenario::Medium => 250,
            Scenario::Large => 500,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "small" => Ok(Scenario::Small),
            "medium" => Ok(Scenario::Medium),
            "large" => Ok(Scenario::Large),
            _ => Err(Error::Malformed(format!("unknown scenario {s:?}"))),
        }
    }
}

/// How many copies each mold gets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CopiesPolicy {
    Fixed(u32),
    /// Drawn per mold.
    OneOf(Vec<u32>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioSpec {
    pub scenario: Scenario,
    /// Demand baseline of mold `i + 1`; draws fall within +-20% of it.
    pub baselines: Vec<u32>,
    pub demand_range: (u32, u32),
    /// `(mold types, heaters)` choices, one drawn per instance.
    pub structures: Vec<(u32, u32)>,
    /// Groups of mold ids that may share a heater and the heaters they run on.
    pub groups: Vec<(Vec<u32>, Vec<u32>)>,
    pub copies: CopiesPolicy,
    /// `(part id, copies, mold ids)`; parts whose molds are absent are skipped.
    pub parts: Vec<(u32, u32, Vec<u32>)>,
    pub phi: u32,
    pub tc_pool: Vec<u32>,
    pub tq_pool: Vec<u32>,
    pub tv_pool: Vec<u32>,
}

impl ScenarioSpec {
    pub fn new(scenario: Scenario) -> Self {
        let (baselines, demand_range, copies) = match scenario {
            Scenario::Small => (
                vec![28, 45, 73, 118, 190, 307, 495],
                (22, 595),
                CopiesPolicy::Fixed(1),
            ),
            Scenario::Medium => (
                vec![139, 225, 365, 591, 957, 1550, 2510],
                (111, 3012),
                CopiesPolicy::Fixed(2),
            ),
            Scenario::Large => (
                vec![2024, 2423, 2900, 3472, 4156, 4975, 5956],
                (1619, 7147),
                CopiesPolicy::OneOf(vec![2, 10, 15]),
            ),
        };
        let mut parts = vec![(1, 1, vec![1, 2])];
        if scenario == Scenario::Large {
            parts.push((2, 2, vec![3, 4]));
        }
        ScenarioSpec {
            scenario,
            baselines,
            demand_range,
            structures: vec![(5, 7), (5, 12), (7, 12)],
            groups: vec![
                ((1..=5).collect(), (1..=7).collect()),
                (vec![6, 7], vec![8, 9, 10]),
                (vec![8, 9], vec![11, 12]),
            ],
            copies,
            parts,
            phi: PHI,
            tc_pool: TC_POOL.to_vec(),
            tq_pool: TQ_POOL.to_vec(),
            tv_pool: TV_POOL.to_vec(),
        }
    }

    pub fn small() -> Self {
        Self::new(Scenario::Small)
    }

    pub fn medium() -> Self {
        Self::new(Scenario::Medium)
    }

    pub fn large() -> Self {
        Self::new(Scenario::Large)
    }
}

fn draw<R: Rng + ?Sized>(rng: &mut R, pool: &[u32]) -> u32 {
    *pool.choose(rng).expect("non-empty pool")
}

/// Uniform integer within +-20% of `baseline`, clamped to `range`.
pub fn draw_demand<R: Rng + ?Sized>(rng: &mut R, baseline: u32, range: (u32, u32)) -> u32 {
    let lo = (baseline * 4).div_ceil(5);
    let hi = baseline * 6 / 5;
    rng.random_range(lo..=hi.max(lo)).clamp(range.0, range.1)
}

pub fn generate_spec(spec: &ScenarioSpec, seed: u64) -> InstanceSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let &(n_molds, n_heaters) = spec.structures.choose(&mut rng).expect("a structure");
    let mut molds = Vec::new();
    let mut curing = Vec::new();
    let mut mold_compat = Vec::new();
    for id in 1..=n_molds {
        let nm = match &spec.copies {
            CopiesPolicy::Fixed(n) => *n,
            CopiesPolicy::OneOf(pool) => draw(&mut rng, pool),
        };
        let tc = draw(&mut rng, &spec.tc_pool);
        let tq = draw(&mut rng, &spec.tq_pool);
        let tv = draw(&mut rng, &spec.tv_pool);
        let baseline = spec.baselines[(id as usize - 1) % spec.baselines.len()];
        let demand = draw_demand(&mut rng, baseline, spec.demand_range);
        molds.push(MoldSpec { id: MoldId(id), nm, tc, tq, demand });
        if let Some((group, heaters)) = spec.groups.iter().find(|(g, _)| g.contains(&id)) {
            for &h in heaters.iter().filter(|&&h| h <= n_heaters) {
                curing.push(CuringTime { mold: MoldId(id), heater: HeaterId(h), tv });
            }
            for &j in group.iter().filter(|&&j| j >= id && j <= n_molds) {
                mold_compat.push((MoldId(id), MoldId(j)));
            }
        }
    }
    let parts = spec
        .parts
        .iter()
        .filter(|(_, _, ms)| ms.iter().all(|&m| m <= n_molds))
        .map(|(id, np, ms)| PartSpec {
            id: PartId(*id),
            np: *np,
            molds: ms.iter().map(|&m| MoldId(m)).collect(),
        })
        .collect::<Vec<_>>();
    let mut meta = BTreeMap::new();
    meta.insert("scenario".to_string(), spec.scenario.to_string());
    meta.insert("seed".to_string(), seed.to_string());
    meta.insert("structure".to_string(), format!("{n_molds} molds, {n_heaters} heaters"));
    for p in &parts {
        meta.insert(format!("part_{}_np", p.id), p.np.to_string());
    }
    InstanceSpec {
        name: format!("{}-{seed}", spec.scenario),
        phi: spec.phi,
        molds,
        heaters: (1..=n_heaters).map(HeaterId).collect(),
        curing,
        mold_compat,
        parts,
        init: Vec::new(),
        meta,
    }
}

/// Deterministic in `(spec, seed)`.
pub fn generate_instance(spec: &ScenarioSpec, seed: u64) -> Instance {
    Instance::new(generate_spec(spec, seed)).expect("generated ids are consistent")
}

/// Bounds of the tiny family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TinySpec {
    pub max_molds: u32,
    pub max_heaters: u32,
    pub max_total_demand: u32,
    pub phi_range: (u32, u32),
    pub tv_range: (u32, u32),
    /// Percent chance that a heater starts loaded.
    pub init_percent: u32,
    /// Percent chance of a shared part.
    pub part_percent: u32,
}

impl Default for TinySpec {
    fn default() -> Self {
        TinySpec {
            max_molds: 3,
            max_heaters: 2,
            max_total_demand: 30,
            phi_range: (600, 2000),
            tv_range: (60, 400),
            init_percent: 30,
            part_percent: 30,
        }
    }
}

/// A small random admissible instance: at most `max_molds` molds on
/// `max_heaters` heaters with total demand up to `max_total_demand`.
pub fn generate_tiny(t: &TinySpec, seed: u64) -> InstanceSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_m = rng.random_range(1..=t.max_molds);
    let n_h = rng.random_range(1..=t.max_heaters);
    let phi = rng.random_range(t.phi_range.0..=t.phi_range.1);
    let max_overhead = phi / 8;
    let mut molds = Vec::new();
    let mut curing = Vec::new();
    let mut left = t.max_total_demand;
    for id in 1..=n_m {
        let share = t.max_total_demand / n_m;
        let demand = rng.random_range(0..=share.min(left));
        left -= demand;
        molds.push(MoldSpec {
            id: MoldId(id),
            nm: rng.random_range(1..=3),
            tc: rng.random_range(10..=max_overhead),
            tq: rng.random_range(10..=max_overhead),
            demand,
        });
        let forced = rng.random_range(1..=n_h);
        for h in 1..=n_h {
            if h == forced || rng.random_bool(0.5) {
                let tv = rng.random_range(t.tv_range.0..=t.tv_range.1.min(phi));
                curing.push(CuringTime { mold: MoldId(id), heater: HeaterId(h), tv });
            }
        }
    }
    let mut mold_compat = Vec::new();
    for i in 1..=n_m {
        for j in i..=n_m {
            if rng.random_bool(0.6) {
                mold_compat.push((MoldId(i), MoldId(j)));
            }
        }
    }
    let mut parts = Vec::new();
    if n_m >= 2 && rng.random_range(0..100) < t.part_percent {
        let np = rng.random_range(1..=2);
        parts.push(PartSpec { id: PartId(1), np, molds: vec![MoldId(1), MoldId(2)] });
    }
    let mut init = Vec::new();
    for h in 1..=n_h {
        if rng.random_range(0..100) < t.init_percent {
            let hosted: Vec<u32> = curing
                .iter()
                .filter(|c| c.heater == HeaterId(h))
                .map(|c| c.mold.0)
                .collect();
            let loaded = |m: u32| init.iter().filter(|l: &&InitialLoad| l.mold.0 == m).count() as u32;
            if let Some(&m) = hosted.choose(&mut rng) {
                if loaded(m) >= molds[m as usize - 1].nm {
                    continue;
                }
                init.push(InitialLoad { mold: MoldId(m), heater: HeaterId(h), count: 1 });
            }
        }
    }
    InstanceSpec {
        name: format!("tiny-{seed}"),
        phi,
        molds,
        heaters: (1..=n_h).map(HeaterId).collect(),
        curing,
        mold_compat,
        parts,
        init,
        meta: BTreeMap::new(),
    }
}

/// Name and spec pairs of `count` tiny instances starting at `seed`.
pub fn tiny_suite(t: &TinySpec, seed: u64, count: u64) -> Vec<(String, InstanceSpec)> {
    (seed..seed + count)
        .map(|s| {
            let spec = generate_tiny(t, s);
            (spec.name.clone(), spec)
        })
        .collect()
}
