//! Small reference instances.
//!
//! `toy1`: molds 1 and 2 with two copies each, setup 600, removal 300,
//! demand 10 each, one heater curing both in 400, all pairs compatible.
//! `toy2`: as `toy1` with one copy per mold and a single part shared by both.

use alloc::string::String;
use alloc::vec;

use super::instance::{
    CuringTime, HeaterId, Instance, InstanceSpec, MoldId, MoldSpec, PartId, PartSpec,
};

pub const PHI: u32 = 14_400;

fn mold(id: u32, nm: u32, demand: u32) -> MoldSpec {
    MoldSpec { id: MoldId(id), nm, tc: 600, tq: 300, demand }
}

pub fn toy1_spec() -> InstanceSpec {
    InstanceSpec {
        name: String::from("toy1"),
        phi: PHI,
        molds: vec![mold(1, 2, 10), mold(2, 2, 10)],
        heaters: vec![HeaterId(1)],
        curing: vec![
            CuringTime { mold: MoldId(1), heater: HeaterId(1), tv: 400 },
            CuringTime { mold: MoldId(2), heater: HeaterId(1), tv: 400 },
        ],
        mold_compat: vec![(MoldId(1), MoldId(1)), (MoldId(1), MoldId(2)), (MoldId(2), MoldId(2))],
        ..InstanceSpec::default()
    }
}

pub fn toy2_spec() -> InstanceSpec {
    let mut spec = toy1_spec();
    spec.name = String::from("toy2");
    for m in &mut spec.molds {
        m.nm = 1;
    }
    spec.parts = vec![PartSpec { id: PartId(1), np: 1, molds: vec![MoldId(1), MoldId(2)] }];
    spec
}

/// `toy1` with a second heater that cures both molds.
pub fn toy1_two_heaters_spec() -> InstanceSpec {
    let mut spec = toy1_spec();
    spec.name = String::from("toy1-2h");
    spec.heaters.push(HeaterId(2));
    for m in [1, 2] {
        spec.curing.push(CuringTime { mold: MoldId(m), heater: HeaterId(2), tv: 400 });
    }
    spec
}

/// Every demand set to zero.
pub fn zero_demand_spec() -> InstanceSpec {
    let mut spec = toy1_spec();
    spec.name = String::from("zero");
    for m in &mut spec.molds {
        m.demand = 0;
    }
    spec
}

pub fn toy1() -> Instance {
    Instance::new(toy1_spec()).expect("fixture is well formed")
}

pub fn toy2() -> Instance {
    Instance::new(toy2_spec()).expect("fixture is well formed")
}

pub fn toy1_two_heaters() -> Instance {
    Instance::new(toy1_two_heaters_spec()).expect("fixture is well formed")
}

pub fn zero_demand() -> Instance {
    Instance::new(zero_demand_spec()).expect("fixture is well formed")
}
