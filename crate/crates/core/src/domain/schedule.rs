use alloc::vec::Vec;
use core::fmt;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::instance::{HeaterId, MoldId};

/// A batch of a mold pair placed on a heater for `length` consecutive
/// periods starting at the 0-based period `start`. `q` is the number of
/// tires per mold slot, so an identical pair cures `2q` tires.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct AssignmentTuple {
    pub id: u32,
    pub m1: MoldId,
    pub m2: MoldId,
    pub q: u32,
    pub heater: HeaterId,
    pub start: u32,
    pub length: u32,
}

impl AssignmentTuple {
    /// First period after the batch.
    pub fn end(&self) -> u32 {
        self.start + self.length
    }

    pub fn covers(&self, period: u32) -> bool {
        self.start <= period && period < self.end()
    }

    /// Tires of `mold` this tuple produces.
    pub fn production_of(&self, mold: MoldId) -> u64 {
        let slots = (self.m1 == mold) as u64 + (self.m2 == mold) as u64;
        slots * self.q as u64
    }
}

/// Makespan of a possibly missing solution; a missing solution is worse than
/// any finite makespan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Makespan {
    Finite(u32),
    Infinite,
}

impl Makespan {
    pub fn of(s: Option<&Schedule>) -> Makespan {
        s.map_or(Makespan::Infinite, |s| Makespan::Finite(s.makespan()))
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Makespan::Finite(v) => Some(v),
            Makespan::Infinite => None,
        }
    }
}

impl fmt::Display for Makespan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Makespan::Finite(v) => write!(f, "{v}"),
            Makespan::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize), serde(transparent))]
pub struct Schedule {
    pub tuples: Vec<AssignmentTuple>,
}

impl Schedule {
    pub fn new(tuples: Vec<AssignmentTuple>) -> Self {
        Schedule { tuples }
    }

    /// Latest completion period `max(start + length)`; `0` without tuples.
    pub fn makespan(&self) -> u32 {
        self.tuples.iter().map(AssignmentTuple::end).max().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn production_of(&self, mold: MoldId) -> u64 {
        self.tuples.iter().map(|t| t.production_of(mold)).sum()
    }

    pub fn last_id(&self) -> u32 {
        self.tuples.iter().map(|t| t.id).max().unwrap_or(0)
    }

    /// Tuples sorted by heater then start.
    pub fn sorted(&self) -> Vec<AssignmentTuple> {
        let mut v = self.tuples.clone();
        v.sort_by_key(|t| (t.heater, t.start, t.id));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn tuple(start: u32, length: u32) -> AssignmentTuple {
        AssignmentTuple {
            id: start,
            m1: MoldId(1),
            m2: MoldId(2),
            q: 1,
            heater: HeaterId(1),
            start,
            length,
        }
    }

    #[test]
    fn makespan_single_tuple() {
        assert_eq!(Schedule::new(vec![tuple(0, 1)]).makespan(), 1);
    }

    #[test]
    fn makespan_is_max_completion() {
        assert_eq!(Schedule::new(vec![tuple(0, 1), tuple(1, 1)]).makespan(), 2);
    }

    #[test]
    fn missing_solution_is_infinite() {
        assert_eq!(Makespan::of(None), Makespan::Infinite);
        assert!(Makespan::Finite(u32::MAX) < Makespan::Infinite);
        assert_eq!(Makespan::of(Some(&Schedule::default())), Makespan::Finite(0));
    }

    #[test]
    fn identical_pair_counts_twice() {
        let t = AssignmentTuple { m1: MoldId(3), m2: MoldId(3), q: 4, ..tuple(0, 1) };
        assert_eq!(t.production_of(MoldId(3)), 8);
        let mixed = AssignmentTuple { m1: MoldId(1), m2: MoldId(3), q: 4, ..tuple(0, 1) };
        assert_eq!(mixed.production_of(MoldId(3)), 4);
        assert_eq!(mixed.production_of(MoldId(1)), 4);
    }
}
