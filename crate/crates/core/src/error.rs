use alloc::string::String;
use alloc::vec::Vec;

use crate::domain::{HeaterId, MoldId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("malformed instance: {0}")]
    Malformed(String),
    #[error("instance is not admissible: {0}")]
    Inadmissible(String),
    #[error("mold {0} has demand but no compatible heater")]
    NoCompatibleHeater(MoldId),
    #[error("mold {mold} cannot cure a single tire within one period on heater {heater}")]
    PeriodTooShort { mold: MoldId, heater: HeaterId },
    #[error("no admissible mold pair can cover the residual demand of mold {0}")]
    UnproduciblePair(MoldId),
    #[error("tuple {0} has no feasible heater placement")]
    NoFeasiblePlacement(u32),
    #[error("no feasible schedule found")]
    Infeasible,
    #[error("assignment violates {} constraint(s): {}", .0.len(), .0.first().map(String::as_str).unwrap_or(""))]
    InfeasibleAssignment(Vec<String>),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("schedule does not fit a horizon of {thb} periods (makespan {makespan})")]
    HorizonTooShort { thb: u32, makespan: u32 },
    #[error("solver failure: {0}")]
    Solver(String),
}
