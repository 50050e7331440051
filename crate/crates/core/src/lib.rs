//! Core algorithms for the tire-curing lot-sizing and scheduling problem.
//!
//! A heater holds at most two molds per working period. Molds have limited
//! copies, some share auxiliary parts, and every mold change costs setup and
//! removal time inside the period where it happens. The crate computes
//! minimum-makespan curing schedules through
//!
//! * [`heuristic`]: a randomized multi-start constructive + improvement search,
//! * [`milp`]: the mixed-integer formulation over a fixed planning horizon,
//!   including LP-file emission and assignment decoding,
//! * [`exact`]: a depth-first branch-and-bound over per-period heater
//!   configurations, usable as an optimality oracle on small instances,
//! * [`hop`]: the hybrid procedure that feeds the heuristic makespan to the
//!   MILP as its horizon.
//!
//! Everything here is `no_std` + `alloc`; file formats, subprocesses and
//! threads live in the companion `curing` crate.
#![no_std]

extern crate alloc;

pub mod domain;
pub mod error;
pub mod exact;
pub mod gen;
pub mod heuristic;
pub mod hop;
pub mod milp;
pub mod thb;

pub use domain::{
    derive_aux_sets, validate_instance, validate_schedule, AssignmentTuple, AuxSets, Config,
    HeaterId, Instance, InstanceSpec, Makespan, MoldId, PartId, PartsMode, Schedule,
};
pub use error::Error;

/// Source of elapsed wall time for solvers that honor time limits.
///
/// The core crate has no clock of its own; [`NoClock`] disables time limits.
pub trait Clock {
    fn elapsed_secs(&self) -> f64;
}

/// A clock that never advances.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn elapsed_secs(&self) -> f64 {
        0.0
    }
}
