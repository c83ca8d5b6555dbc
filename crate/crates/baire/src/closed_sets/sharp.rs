//! Forbidden-word priority construction: converging negative information to
//! a negatively presented word complement.
//!
//! Stage `s = <i, j>` attends to column `i` when `j = 0`, when the column value
//! changed, or when it holds a word while `F_i` is empty. Attention refills
//! `F_i` with the minimal words of length `max(|w|, L + 1)` extending the
//! column word `w` (`L` is the longest output so far; `NoBall` empties `F_i`)
//! and clears every `F_k` with `k > i`. Each stage then emits every unseen
//! word numbered `<= s` outside `∪ F`, or `ε` when there is none.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::staged::{StageProducer, Staged};
use super::{NegClosedSetJump, SharpClosedSet, WordEnum};
use crate::names::cantor_unpair;
use crate::spaces::{Token, Word};

/// Bookkeeping event of the priority construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum PriorityEvent {
    /// `F_column` replaced by the extensions of `word` of length `length`.
    Refill {
        stage: u64,
        column: u64,
        word: Word,
        length: usize,
    },
    /// `F_column` emptied because the column holds `NoBall`.
    Reset { stage: u64, column: u64 },
    /// A non-empty `F_column` cleared by attention to the higher-priority column `by`.
    Clear { stage: u64, column: u64, by: u64 },
}

struct PriorityState {
    source: NegClosedSetJump,
    stage: u64,
    forbidden: BTreeMap<u64, Vec<Word>>,
    blocked: HashMap<Word, u32>,
    seen: HashSet<Word>,
    pending: BTreeSet<Word>,
    longest: usize,
    dirty: bool,
    events: Vec<PriorityEvent>,
    record: bool,
}

impl PriorityState {
    fn new(source: NegClosedSetJump, record: bool) -> Self {
        PriorityState {
            source,
            stage: 0,
            forbidden: BTreeMap::new(),
            blocked: HashMap::new(),
            seen: HashSet::new(),
            pending: BTreeSet::new(),
            longest: 0,
            dirty: false,
            events: Vec::new(),
            record,
        }
    }

    fn drop_forbidden(&mut self, column: u64) -> bool {
        let Some(words) = self.forbidden.remove(&column) else {
            return false;
        };
        for w in &words {
            if let Some(count) = self.blocked.get_mut(w) {
                *count -= 1;
                if *count == 0 {
                    self.blocked.remove(w);
                }
            }
        }
        self.dirty = true;
        !words.is_empty()
    }

    fn attend(&mut self, column: u64, value: Token) {
        let s = self.stage;
        self.drop_forbidden(column);
        match value {
            Token::NoBall => {
                if self.record {
                    self.events.push(PriorityEvent::Reset { stage: s, column });
                }
            }
            Token::Word(w) => {
                let length = w.len().max(self.longest + 1);
                let extra = length - w.len();
                let words: Vec<Word> = (0..1u64 << extra)
                    .map(|x| {
                        let mut u = w.clone();
                        for b in (0..extra).rev() {
                            u.push(((x >> b) & 1) as u8);
                        }
                        u
                    })
                    .collect();
                for u in &words {
                    *self.blocked.entry(u.clone()).or_insert(0) += 1;
                }
                self.forbidden.insert(column, words);
                if self.record {
                    self.events.push(PriorityEvent::Refill {
                        stage: s,
                        column,
                        word: w,
                        length,
                    });
                }
            }
        }
        let lower: Vec<u64> = self
            .forbidden
            .range(column + 1..)
            .map(|(&k, _)| k)
            .collect();
        for k in lower {
            if self.drop_forbidden(k) && self.record {
                self.events.push(PriorityEvent::Clear {
                    stage: s,
                    column: k,
                    by: column,
                });
            }
        }
    }

    fn step(&mut self, out: &mut Vec<Word>) {
        let s = self.stage;
        let (i, j) = cantor_unpair(s);
        let value = self.source.entry(i, j);
        let changed = j > 0 && self.source.entry(i, j - 1) != value;
        let starved =
            value.word().is_some() && !self.forbidden.get(&i).is_some_and(|f| !f.is_empty());
        if j == 0 || changed || starved {
            self.attend(i, value);
        }

        let fresh = Word::from_number(s);
        if !self.seen.contains(&fresh) {
            self.pending.insert(fresh.clone());
        }
        let candidates: Vec<Word> = if self.dirty {
            self.pending.iter().cloned().collect()
        } else {
            vec![fresh]
        };
        self.dirty = false;
        let before = out.len();
        for u in candidates {
            if self.pending.contains(&u) && !self.blocked.contains_key(&u) {
                self.pending.remove(&u);
                self.longest = self.longest.max(u.len());
                self.seen.insert(u.clone());
                out.push(u);
            }
        }
        if out.len() == before {
            out.push(Word::empty());
        }
        self.stage += 1;
    }
}

impl StageProducer for PriorityState {
    type Item = Word;

    fn run_stage(&mut self, out: &mut Vec<Word>) {
        self.step(out);
    }
}

struct StagedWords(Staged<PriorityState>);

impl WordEnum for StagedWords {
    fn token(&self, index: u64) -> Token {
        Token::Word(self.0.get(index))
    }
}

/// Lazily evaluated priority construction.
pub fn negjump_to_sharp(set: &NegClosedSetJump) -> SharpClosedSet {
    SharpClosedSet::new(Arc::new(StagedWords(Staged::new(PriorityState::new(
        set.clone(),
        false,
    )))))
}

/// Result of running the priority construction for a fixed number of stages.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PriorityRun {
    pub stages: u64,
    pub tokens: Vec<Word>,
    pub events: Vec<PriorityEvent>,
    /// Current `F_i` for every column with a non-empty forbidden set.
    pub forbidden: BTreeMap<u64, Vec<Word>>,
}

impl PriorityRun {
    /// Words numbered below `stages` that have not been emitted.
    pub fn unemitted(&self) -> Vec<Word> {
        let emitted: HashSet<&Word> = self.tokens.iter().collect();
        (0..self.stages)
            .map(Word::from_number)
            .filter(|w| !emitted.contains(w))
            .collect()
    }

    /// Stage of the last refill, reset or clear.
    pub fn last_event_stage(&self) -> Option<u64> {
        self.events.iter().rev().find_map(|e| match e {
            PriorityEvent::Refill { stage, .. } | PriorityEvent::Clear { stage, .. } => {
                Some(*stage)
            }
            PriorityEvent::Reset { .. } => None,
        })
    }

    /// Number of `Refill` events for `column`.
    pub fn refills(&self, column: u64) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e, PriorityEvent::Refill { column: c, .. } if *c == column))
            .count()
    }

    /// Number of `Clear` events for `column`.
    pub fn clears(&self, column: u64) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e, PriorityEvent::Clear { column: c, .. } if *c == column))
            .count()
    }
}

/// Runs stages `0..stages` and records every bookkeeping event.
pub fn priority_run(set: &NegClosedSetJump, stages: u64) -> PriorityRun {
    let mut state = PriorityState::new(set.clone(), true);
    let mut tokens = Vec::new();
    for _ in 0..stages {
        state.step(&mut tokens);
    }
    let forbidden = state
        .forbidden
        .into_iter()
        .filter(|(_, f)| !f.is_empty())
        .collect();
    PriorityRun {
        stages,
        tokens,
        events: state.events,
        forbidden,
    }
}
