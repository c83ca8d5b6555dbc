//! Finite program tables standing in for an effective numbering, and the
//! family of closed sets whose complement union has no computable point.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::closed_sets::{PointEnum, PosClosedSet};
use crate::error::{Error, Result};
use crate::names::FiniteGen;
use crate::spaces::{CantorPoint, PointToken, Word};

/// Value of a simulated program on one argument under a step budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepResult {
    Value(u8),
    DivergesSoFar,
}

/// A partial bit function with a step count per argument; `null` steps
/// mean the program never halts on that argument.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawEntry")]
pub struct ProgramEntry {
    values: FiniteGen<u8>,
    steps: FiniteGen<Option<u64>>,
}

#[derive(Deserialize)]
struct RawEntry {
    values: FiniteGen<u8>,
    steps: FiniteGen<Option<u64>>,
}

impl TryFrom<RawEntry> for ProgramEntry {
    type Error = Error;

    fn try_from(raw: RawEntry) -> Result<Self> {
        ProgramEntry::new(raw.values, raw.steps)
    }
}

impl ProgramEntry {
    pub fn new(values: FiniteGen<u8>, steps: FiniteGen<Option<u64>>) -> Result<Self> {
        CantorPoint::new(values.clone())?;
        Ok(ProgramEntry { values, steps })
    }

    /// A total program running in `steps` on every argument.
    pub fn total(values: FiniteGen<u8>, steps: u64) -> Result<Self> {
        Self::new(values, FiniteGen::constant(Some(steps)))
    }

    pub fn steps(&self, n: u64) -> Option<u64> {
        *self.steps.at(n)
    }

    /// Monotone in `budget`: once a value appears it never changes.
    pub fn eval(&self, n: u64, budget: u64) -> StepResult {
        match self.steps(n) {
            Some(cost) if cost <= budget => StepResult::Value(*self.values.at(n)),
            _ => StepResult::DivergesSoFar,
        }
    }

    pub fn is_total(&self) -> bool {
        self.steps
            .head()
            .iter()
            .chain(self.steps.tail_values().iter())
            .all(Option::is_some)
    }

    /// The function computed, when total.
    pub fn function(&self) -> Option<CantorPoint> {
        self.is_total()
            .then(|| CantorPoint::new(self.values.clone()).expect("validated bits"))
    }

    /// Least `n` whose step count exceeds `budget`, if any. Step counts are
    /// eventually periodic, so the search is bounded.
    fn first_unfinished(&self, budget: u64) -> Option<u64> {
        (0..self.steps.settled_len() as u64)
            .find(|&n| self.eval(n, budget) == StepResult::DivergesSoFar)
    }

    /// `f_t(n) = φ(n)` when every argument `k <= n` halts within `t` steps,
    /// else `0`.
    pub fn truncated(&self, budget: u64) -> CantorPoint {
        match self.first_unfinished(budget) {
            None => CantorPoint::new(self.values.clone()).expect("validated bits"),
            Some(len) => {
                let prefix =
                    Word::from_bits(&self.values.prefix(len as usize)).expect("validated bits");
                CantorPoint::padded(&prefix, 0)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ProgramTable {
    pub entries: Vec<ProgramEntry>,
}

impl ProgramTable {
    pub fn new(entries: Vec<ProgramEntry>) -> Self {
        ProgramTable { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

struct TruncationList {
    entry: ProgramEntry,
}

impl PointEnum for TruncationList {
    fn point(&self, index: u64) -> PointToken {
        PointToken::Point(self.entry.truncated(index))
    }
}

/// Member `i` is the closure of `{f_{i,t} : t}`, listed at position `t`.
/// It contains the function of entry `i` whenever that entry is total.
pub fn noncomputable_family(table: &ProgramTable) -> Vec<PosClosedSet> {
    table
        .entries
        .iter()
        .map(|entry| {
            PosClosedSet::new(Arc::new(TruncationList {
                entry: entry.clone(),
            }))
        })
        .collect()
}
