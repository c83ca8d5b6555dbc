//! The computable diagonalizer for sequences of nowhere dense sets.

use serde::{Deserialize, Serialize};

use super::{certify_nowhere_dense, SetFamily, TraceEvent};
use crate::closed_sets::NegClosedSet;
use crate::names::Outcome;
use crate::spaces::{CantorPoint, Word};

/// Sets to avoid, with an optional depth at which nowhere density was spot checked.
#[derive(Clone)]
pub struct Bct0Instance {
    pub sets: SetFamily,
    pub nowhere_dense_certified: Option<usize>,
}

impl Bct0Instance {
    pub fn new(sets: Vec<NegClosedSet>) -> Self {
        Bct0Instance {
            sets: SetFamily::from_vec(sets),
            nowhere_dense_certified: None,
        }
    }

    /// Runs the spot check on every set and records the depth when all pass.
    pub fn certify(mut self, depth: usize, fuel: u64) -> Self {
        let ok =
            (0..self.sets.len()).all(|i| certify_nowhere_dense(&self.sets.get(i), depth, fuel));
        self.nowhere_dense_certified = ok.then_some(depth);
        self
    }
}

/// A removed ball of `set_index`, found at `enumeration_position` of its
/// removal stream, that contains the output point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EscapeWitness {
    pub set_index: u64,
    pub ball: Word,
    pub enumeration_position: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bct0Solution {
    /// The constructed prefix; the output point is `prefix·0^ω`.
    pub prefix: Word,
    pub witnesses: Vec<EscapeWitness>,
    #[serde(default)]
    pub trace: Vec<TraceEvent>,
}

impl Bct0Solution {
    pub fn point(&self) -> CantorPoint {
        CantorPoint::padded(&self.prefix, 0)
    }
}

/// [`bct0_solve_from`] starting at the empty prefix.
pub fn bct0_solve(inst: &Bct0Instance, fuel: u64) -> Outcome<Bct0Solution> {
    bct0_solve_from(inst, &Word::empty(), fuel)
}

/// Escapes the sets in order: the first removed ball `u` compatible with the
/// prefix `v` (within `fuel` positions) replaces `v` by the longer of the two,
/// then `v` grows by one `0`. `Inconclusive` when a search runs out of fuel,
/// which a nowhere dense set never causes given enough fuel.
pub fn bct0_solve_from(inst: &Bct0Instance, start: &Word, fuel: u64) -> Outcome<Bct0Solution> {
    let mut v = start.clone();
    let mut witnesses = Vec::with_capacity(inst.sets.len() as usize);
    let mut trace = Vec::new();
    for i in 0..inst.sets.len() {
        trace.push(TraceEvent::Escape {
            stage: i,
            set: i,
            prefix: v.clone(),
        });
        let Some((position, u)) = inst.sets.get(i).first_compatible(&v, fuel) else {
            return Outcome::Inconclusive;
        };
        if u.len() > v.len() {
            v = u.clone();
        }
        trace.push(TraceEvent::Witness {
            stage: i,
            set: i,
            position,
            ball: u.clone(),
            prefix: v.clone(),
        });
        witnesses.push(EscapeWitness {
            set_index: i,
            ball: u,
            enumeration_position: position,
        });
        v.push(0);
    }
    Outcome::Value(Bct0Solution {
        prefix: v,
        witnesses,
        trace,
    })
}

/// Runs the diagonalizer from each of the first `count` words in shortlex
/// order; the outputs are dense in the complement of the union.
pub fn dbct0_solve(inst: &Bct0Instance, count: u64, fuel: u64) -> Vec<Outcome<Bct0Solution>> {
    (0..count)
        .map(|n| bct0_solve_from(inst, &Word::from_number(n), fuel))
        .collect()
}
