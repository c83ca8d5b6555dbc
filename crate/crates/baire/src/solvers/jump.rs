//! The diagonalizer run against converging negative information: witnesses
//! are re-validated every stage and the prefix rewinds to the last valid one.

use serde::{Deserialize, Serialize};

use super::TraceEvent;
use crate::closed_sets::{pos_to_negjump, NegClosedSetJump, PosClosedSet};
use crate::names::GuessStream;
use crate::spaces::{Token, Word};

/// Column `column` of set `set_index` held `ball` when it was adopted at `stage`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpWitness {
    pub set_index: u64,
    pub column: u64,
    pub ball: Word,
    pub stage: u64,
    /// Prefix before this witness was adopted; a rewind restores it.
    pub prefix_before: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpRun {
    /// Prefix emitted after each stage.
    pub prefixes: GuessStream<Word>,
    /// Witnesses held after the last stage.
    pub witnesses: Vec<JumpWitness>,
    pub rewinds: u64,
    #[serde(default)]
    pub trace: Vec<TraceEvent>,
}

impl JumpRun {
    pub fn final_prefix(&self) -> Word {
        self.prefixes.last().cloned().unwrap_or_default()
    }

    /// True when every set has a witness.
    pub fn complete(&self, sets: usize) -> bool {
        self.witnesses.len() == sets
    }
}

/// Runs stages `0..stages`. At stage `s` only columns `<= s` are searched,
/// least column first.
pub fn jump_diagonalize(sets: &[NegClosedSetJump], stages: u64) -> JumpRun {
    let mut v = Word::empty();
    let mut witnesses: Vec<JumpWitness> = Vec::new();
    let mut rewinds = 0;
    let mut prefixes = Vec::with_capacity(stages as usize);
    let mut trace = Vec::new();
    for stage in 0..stages {
        let broken = witnesses.iter().position(|w| {
            sets[w.set_index as usize].entry(w.column, stage) != Token::Word(w.ball.clone())
        });
        if let Some(k) = broken {
            let w = &witnesses[k];
            v = w.prefix_before.clone();
            trace.push(TraceEvent::Rewind {
                stage,
                witness: k as u64,
                set: w.set_index,
                column: w.column,
                prefix: v.clone(),
            });
            witnesses.truncate(k);
            rewinds += 1;
        }
        while witnesses.len() < sets.len() {
            let i = witnesses.len();
            let snapshot = sets[i].snapshot(stage, stage + 1);
            let found = snapshot.iter().enumerate().find_map(|(c, t)| match t {
                Token::Word(u) if u.compatible(&v) => Some((c as u64, u.clone())),
                _ => None,
            });
            let Some((column, u)) = found else { break };
            let before = v.clone();
            if u.len() > v.len() {
                v = u.clone();
            }
            trace.push(TraceEvent::Witness {
                stage,
                set: i as u64,
                position: column,
                ball: u.clone(),
                prefix: v.clone(),
            });
            witnesses.push(JumpWitness {
                set_index: i as u64,
                column,
                ball: u,
                stage,
                prefix_before: before,
            });
            v.push(0);
        }
        prefixes.push(v.clone());
    }
    JumpRun {
        prefixes: GuessStream::new(prefixes),
        witnesses,
        rewinds,
        trace,
    }
}

/// The diagonalizer against stage-wise negative approximations of
/// positively given sets.
pub fn bct2_solve(sets: &[PosClosedSet], stages: u64) -> JumpRun {
    let jumps: Vec<NegClosedSetJump> = sets.iter().map(pos_to_negjump).collect();
    jump_diagonalize(&jumps, stages)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_sets::PointStreamSpec;
    use crate::spaces::{CantorPoint, PointToken};

    #[test]
    fn empty_sets_stabilize_immediately() {
        let sets = vec![PosClosedSet::from_spec(PointStreamSpec::constant(PointToken::Inf)); 3];
        let run = bct2_solve(&sets, 20);
        assert_eq!(run.prefixes.settled_from(), Some(0));
        assert_eq!(run.rewinds, 0);
    }

    #[test]
    fn singleton_zero_is_avoided() {
        let zero = CantorPoint::padded(&Word::empty(), 0);
        let sets = vec![PosClosedSet::from_spec(PointStreamSpec::finite(vec![zero]))];
        let run = bct2_solve(&sets, 40);
        assert!(run.final_prefix().bits().contains(&1));
        assert!(run.rewinds >= 1);
        assert!(run.prefixes.settled_from().unwrap() < 10);
    }
}
