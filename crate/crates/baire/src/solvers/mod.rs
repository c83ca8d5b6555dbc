//! Baire category solvers: the computable diagonalizer, the mind-change
//! solver for covers, their limit-level jumps, the cluster-point problem and
//! the transfer from Baire space through Cantor space.

mod bct0;
mod bct1;
mod bct3;
mod jump;
mod transfer;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use bct0::{
    bct0_solve, bct0_solve_from, dbct0_solve, Bct0Instance, Bct0Solution, EscapeWitness,
};
pub use bct1::{bct1_solve, Bct1Instance, Bct1Run, LeaderKill};
pub use bct3::{
    bct3_isolated, bct3_solve, cln_solve, Bct3Run, IsolatedAnswer, IsolatedPoint, MetricPointToken,
    PosJumpTracker,
};
pub use jump::{bct2_solve, jump_diagonalize, JumpRun, JumpWitness};
pub use transfer::{
    baire_bct0_solve, bct0_via_cantor, transfer_family, BaireBct0Solution, BaireEscape,
    TransferSolution,
};

use crate::closed_sets::NegClosedSet;
use crate::spaces::Word;

/// Sets `0..count` of a (possibly infinite) sequence of closed sets.
#[derive(Clone)]
pub struct SetFamily {
    count: u64,
    get: Arc<dyn Fn(u64) -> NegClosedSet + Send + Sync>,
}

impl SetFamily {
    pub fn from_vec(sets: Vec<NegClosedSet>) -> Self {
        let count = sets.len() as u64;
        let sets = Arc::new(sets);
        SetFamily {
            count,
            get: Arc::new(move |i| sets[i as usize].clone()),
        }
    }

    /// The first `count` members of the sequence `get`.
    pub fn from_fn(count: u64, get: impl Fn(u64) -> NegClosedSet + Send + Sync + 'static) -> Self {
        SetFamily {
            count,
            get: Arc::new(get),
        }
    }

    pub fn len(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Panics when `index >= len()`.
    pub fn get(&self, index: u64) -> NegClosedSet {
        assert!(index < self.count, "set index {index} out of range");
        (self.get)(index)
    }
}

/// Depth-`depth` spot check of nowhere density: below every word of length
/// `depth - 2` some extension of length `depth` is excluded by the first
/// `fuel` removals. Passing certifies the check for the set itself.
pub fn certify_nowhere_dense(set: &NegClosedSet, depth: usize, fuel: u64) -> bool {
    let consistent = set.depth_truncate(depth, fuel);
    let lift = depth.min(2);
    Word::all_of_length(depth - lift)
        .all(|u| Word::all_of_length(lift).any(|x| !consistent.contains(&u.concat(&x))))
}

/// Depth-`depth` spot check of covering: every word of length `depth` is
/// consistent with some set after `fuel` removals.
pub fn certify_cover(sets: &[NegClosedSet], depth: usize, fuel: u64) -> bool {
    let consistent: Vec<_> = sets.iter().map(|s| s.depth_truncate(depth, fuel)).collect();
    Word::all_of_length(depth).all(|x| consistent.iter().any(|c| c.contains(&x)))
}

/// One line of a solver trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEvent {
    /// A search for a removed ball compatible with the prefix started.
    Escape { stage: u64, set: u64, prefix: Word },
    /// A ball removed by `set` at `position` was adopted.
    Witness {
        stage: u64,
        set: u64,
        position: u64,
        ball: Word,
        prefix: Word,
    },
    /// Witnesses from index `witness` on were dropped because `set`'s column changed.
    Rewind {
        stage: u64,
        witness: u64,
        set: u64,
        column: u64,
        prefix: Word,
    },
    /// The leading pair `<set, word>` met a removed ball.
    Kill { stage: u64, set: u64, word: Word },
    GuessChange {
        stage: u64,
        from: Option<u64>,
        to: Option<u64>,
    },
}
