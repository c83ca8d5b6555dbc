//! Finitely many mind changes for covers: the guess is the set index of the
//! least pair `<i, w>` (by Cantor code, `w` by shortlex number) whose ball
//! `w·2^ℕ` has not yet been seen to meet a ball removed from `A_i`.

use serde::{Deserialize, Serialize};

use super::{certify_cover, TraceEvent};
use crate::closed_sets::NegClosedSet;
use crate::names::{cantor_unpair, GuessStream, MindChangeStream};
use crate::spaces::Word;

/// A finite cover, with an optional depth at which covering was spot checked.
#[derive(Clone)]
pub struct Bct1Instance {
    pub sets: Vec<NegClosedSet>,
    pub cover_certified: Option<usize>,
}

impl Bct1Instance {
    pub fn new(sets: Vec<NegClosedSet>) -> Self {
        Bct1Instance {
            sets,
            cover_certified: None,
        }
    }

    pub fn certify(mut self, depth: usize, fuel: u64) -> Self {
        self.cover_certified = certify_cover(&self.sets, depth, fuel).then_some(depth);
        self
    }
}

/// The leading pair died at `stage`; the guess moved from `set` to `next_set`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeaderKill {
    pub stage: u64,
    pub set: u64,
    pub word: Word,
    /// Position of the removed ball that met `word`.
    pub position: u64,
    pub next_set: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bct1Run {
    /// Guess after stage `s` reads `s` tokens of every set; `None` when no
    /// pair with code below the search cap survives.
    pub guesses: GuessStream<Option<u64>>,
    pub kills: Vec<LeaderKill>,
    pub leader: Option<(u64, Word)>,
    #[serde(default)]
    pub trace: Vec<TraceEvent>,
}

impl Bct1Run {
    /// The guesses as a revisable answer; stages without a guess end the stream.
    pub fn mind_change_stream(&self) -> MindChangeStream {
        MindChangeStream::from_stages(self.guesses.stages().iter().map_while(|g| *g).collect())
    }

    /// Stages whose kills moved the guess to another index: the first kill of
    /// a stage names the old guess, `next_set` the new one.
    pub fn mind_changes(&self) -> usize {
        let mut changes = 0;
        let mut last_stage = None;
        for k in &self.kills {
            if last_stage != Some(k.stage) && k.next_set.is_some() && k.next_set != Some(k.set) {
                changes += 1;
            }
            last_stage = Some(k.stage);
        }
        changes
    }
}

fn pair_of(code: u64, sets: u64) -> Option<(u64, Word)> {
    let (i, n) = cantor_unpair(code);
    (i < sets).then(|| (i, Word::from_number(n)))
}

/// Runs stages `0..stages`. Pairs die monotonically, so the leader's code only
/// grows; the search for a new leader stops at `code_cap`.
pub fn bct1_solve(inst: &Bct1Instance, stages: u64, code_cap: u64) -> Bct1Run {
    let n = inst.sets.len() as u64;
    let mut code = 0u64;
    let mut leader: Option<(u64, Word)> = None;
    let mut guesses = Vec::with_capacity(stages as usize);
    let mut kills = Vec::new();
    let mut trace = Vec::new();
    let mut last_guess: Option<u64> = None;
    for stage in 0..stages {
        loop {
            if leader.is_none() {
                while code < code_cap && pair_of(code, n).is_none() {
                    code += 1;
                }
                if code >= code_cap {
                    break;
                }
                leader = pair_of(code, n);
            }
            let (i, word) = leader.clone().expect("set above");
            match inst.sets[i as usize].first_compatible(&word, stage) {
                None => break,
                Some((position, _)) => {
                    trace.push(TraceEvent::Kill {
                        stage,
                        set: i,
                        word: word.clone(),
                    });
                    kills.push(LeaderKill {
                        stage,
                        set: i,
                        word,
                        position,
                        next_set: None,
                    });
                    leader = None;
                    code += 1;
                }
            }
        }
        let guess = leader.as_ref().map(|(i, _)| *i);
        // the kills of this stage all hand over to the surviving leader
        for k in kills.iter_mut().rev().take_while(|k| k.stage == stage) {
            k.next_set = guess;
        }
        if guess != last_guess || stage == 0 {
            trace.push(TraceEvent::GuessChange {
                stage,
                from: last_guess,
                to: guess,
            });
        }
        last_guess = guess;
        guesses.push(guess);
    }
    Bct1Run {
        guesses: GuessStream::new(guesses),
        kills,
        leader,
        trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_sets::WordStreamSpec;
    use crate::names::MindChange;
    use crate::spaces::CantorPoint;

    #[test]
    fn whole_space_first() {
        let inst = Bct1Instance::new(vec![NegClosedSet::whole_space(), NegClosedSet::empty_set()]);
        let run = bct1_solve(&inst, 50, 1000);
        assert_eq!(
            run.mind_change_stream().read(50),
            MindChange::Guess {
                guess: 0,
                changes: 0
            }
        );
    }

    #[test]
    fn singleton_loses_to_whole_space() {
        let zero = CantorPoint::padded(&Word::empty(), 0);
        let single = NegClosedSet::from_spec(WordStreamSpec::outside(vec![], vec![zero], vec![]));
        let inst = Bct1Instance::new(vec![single, NegClosedSet::whole_space()]);
        let run = bct1_solve(&inst, 200, 10_000);
        assert_eq!(*run.guesses.last().unwrap(), Some(1));
        assert!(run.mind_changes() >= 1);
        let MindChange::Guess { changes, .. } = run.mind_change_stream().read(200) else {
            panic!()
        };
        assert_eq!(changes as usize, run.mind_changes());
    }
}
