//! Limit-level answers for covers given positively, the isolated-point
//! shortcut on metric spaces, and the cluster-point problem for naturals.

use std::collections::HashSet;
use std::sync::Arc;

use num_integer::Roots;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::TraceEvent;
use crate::closed_sets::PosClosedSet;
use crate::names::{cantor_unpair, FiniteGen, GuessStream, NameStream, Outcome};
use crate::spaces::{two_pow_neg, CantorPoint, RationalMetricSpace, Word};

/// Incremental form of the stage-wise negative approximation of a positively
/// given set: at stage `s`, column `c <= s` holds the word numbered `c`
/// unless one of the first `s` points enters it. Agrees with
/// `pos_to_negjump` entry by entry.
pub struct PosJumpTracker {
    set: PosClosedSet,
    points: Vec<CantorPoint>,
    seen: usize,
    depth: usize,
    prefixes: HashSet<Word>,
}

impl PosJumpTracker {
    pub fn new(set: PosClosedSet) -> Self {
        PosJumpTracker {
            set,
            points: Vec::new(),
            seen: 0,
            depth: 0,
            prefixes: HashSet::from([]),
        }
    }

    fn insert_prefixes(&mut self, p: &CantorPoint, from: usize) {
        for len in from..=self.depth {
            self.prefixes.insert(p.prefix(len));
        }
    }

    /// Reads points up to `stage` and prefixes up to the length of the word
    /// numbered `max_column`.
    fn advance(&mut self, stage: u64, max_column: u64) {
        let depth = Word::from_number(max_column).len();
        if depth > self.depth {
            let old = self.depth;
            self.depth = depth;
            for p in std::mem::take(&mut self.points) {
                self.insert_prefixes(&p, old + 1);
                self.points.push(p);
            }
        }
        while (self.seen as u64) < stage {
            if let Some(p) = self.set.point(self.seen as u64).point().cloned() {
                self.insert_prefixes(&p, 0);
                self.points.push(p);
            }
            self.seen += 1;
        }
    }

    /// Columns `0..=max_column` at `stage` that hold a word.
    pub fn removed_columns(&mut self, stage: u64, max_column: u64) -> Vec<Word> {
        self.advance(stage, max_column);
        (0..=max_column.min(stage))
            .map(Word::from_number)
            .filter(|w| !self.prefixes.contains(w))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bct3Run {
    /// Guess after each stage; `None` when no pair below the cap survives.
    pub guesses: GuessStream<Option<u64>>,
    /// Final leading pair.
    pub leader: Option<(u64, Word)>,
    #[serde(default)]
    pub trace: Vec<TraceEvent>,
}

/// Surviving pairs recomputed at every stage against columns
/// `c <= isqrt(s)`: the lag lets slow dense lists enter a ball before its
/// column is consulted. Stage `s` sees the first `s` points of each set.
pub fn bct3_solve(sets: &[PosClosedSet], stages: u64, code_cap: u64) -> Bct3Run {
    let n = sets.len() as u64;
    let mut trackers: Vec<PosJumpTracker> = sets.iter().cloned().map(PosJumpTracker::new).collect();
    let mut guesses = Vec::with_capacity(stages as usize);
    let mut trace = Vec::new();
    let mut last: Option<u64> = None;
    let mut leader = None;
    for stage in 0..stages {
        let max_column = stage.sqrt();
        let removed: Vec<Vec<Word>> = trackers
            .iter_mut()
            .map(|t| t.removed_columns(stage, max_column))
            .collect();
        leader = (0..code_cap).find_map(|code| {
            let (i, k) = cantor_unpair(code);
            if i >= n {
                return None;
            }
            let w = Word::from_number(k);
            removed[i as usize]
                .iter()
                .all(|u| !u.compatible(&w))
                .then_some((i, w))
        });
        let guess = leader.as_ref().map(|(i, _)| *i);
        if guess != last || stage == 0 {
            trace.push(TraceEvent::GuessChange {
                stage,
                from: last,
                to: guess,
            });
        }
        last = guess;
        guesses.push(guess);
    }
    Bct3Run {
        guesses: GuessStream::new(guesses),
        leader,
        trace,
    }
}

/// A point index of a metric positive list, or the empty-set sentinel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricPointToken {
    Point(u64),
    Inf,
}

impl Serialize for MetricPointToken {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            MetricPointToken::Point(n) => s.serialize_u64(*n),
            MetricPointToken::Inf => s.serialize_str("inf"),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawMetricPoint {
    Index(u64),
    Sentinel(String),
}

impl<'de> Deserialize<'de> for MetricPointToken {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match RawMetricPoint::deserialize(d)? {
            RawMetricPoint::Index(n) => Ok(MetricPointToken::Point(n)),
            RawMetricPoint::Sentinel(s) if s == "inf" => Ok(MetricPointToken::Inf),
            RawMetricPoint::Sentinel(s) => Err(serde::de::Error::custom(format!(
                "unknown point token {s:?}"
            ))),
        }
    }
}

/// `α(index)` is the only point of the ball of radius `2^{-precision}` around it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolatedPoint {
    pub index: u64,
    pub precision: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolatedAnswer {
    pub set_index: u64,
    pub position: u64,
    /// Dovetailing step at which the point was found.
    pub step: u64,
}

/// Searches the lists, dovetailed by Cantor code, for an entry within the
/// isolation radius; such an entry equals the isolated point, so the first
/// hit is final. `Inconclusive` after `fuel` steps.
pub fn bct3_isolated(
    space: &Arc<dyn RationalMetricSpace>,
    lists: &[FiniteGen<MetricPointToken>],
    isolated: IsolatedPoint,
    fuel: u64,
) -> Outcome<IsolatedAnswer> {
    let radius = two_pow_neg(isolated.precision as i64);
    (0..fuel)
        .find_map(|step| {
            let (i, position) = cantor_unpair(step);
            let list = lists.get(i as usize)?;
            match list.at(position) {
                MetricPointToken::Point(m) if space.dist(*m, isolated.index) < radius => {
                    Some(IsolatedAnswer {
                        set_index: i,
                        position,
                        step,
                    })
                }
                _ => None,
            }
        })
        .into()
}

/// Guess after stage `s >= 1` is the least term among positions
/// `[s/2, s)`: on an eventually periodic sequence the window eventually
/// spans whole periods, so the guess settles on the least value that recurs.
/// The stream stops at the first inconclusive term.
pub fn cln_solve(seq: &dyn NameStream, stages: u64, fuel: u64) -> GuessStream<u64> {
    let mut terms = Vec::new();
    let mut guesses = Vec::new();
    for s in 1..=stages {
        let Outcome::Value(t) = seq.query(s - 1, fuel) else {
            break;
        };
        terms.push(t);
        let from = (s / 2) as usize;
        guesses.push(*terms[from..].iter().min().expect("window is non-empty"));
    }
    GuessStream::new(guesses)
}
