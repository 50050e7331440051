//! Problem data, derived index sets, schedules and feasibility checks.

mod aux;
pub mod fixtures;
mod instance;
mod schedule;
mod validate;

pub use aux::{derive_aux_sets, AuxSets};
pub use instance::{
    periods_needed, Config, CuringTime, HeaterId, InitialLoad, Instance, InstanceSpec, Mold,
    MoldId, MoldSpec, Part, PartId, PartSpec, PartsMode,
};
pub use schedule::{AssignmentTuple, Makespan, Schedule};
pub use validate::{
    validate_instance, validate_schedule, FeasibilityReport, InstanceViolation,
    ScheduleViolation, ValidationReport,
};
