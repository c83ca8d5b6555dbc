//! The staged advice-driven construction. Stage `s = <i, j>` acts on
//! requirement `i` with the word `w_{ij}`:
//!
//! 1. `w_{ij} ⊑ v`: `R_i` is satisfied.
//! 2. `v ⊑ w_{ij}`: `v := w_{ij}` and `R_i` is satisfied.
//! 3. incompatible with common prefix `>= l_i`: an event, `c_i += 1` and
//!    `l_i := |v|`; when `c_i = n_i` the search over `j' > j` for
//!    `v ⊑ w_{ij'}` either satisfies `R_i` or never ends.

use serde::{Deserialize, Serialize};

use super::{Advice, CeOpenFamily, ColumnToken};
use crate::error::{Error, Result};
use crate::names::cantor_unpair;
use crate::par::Executor;
use crate::spaces::{CantorPoint, Word};

/// How a requirement was met.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SatisfiedBy {
    Prefix,
    Extension,
    CriticalSearch,
}

/// Per-requirement variables: event counter, length bound and the
/// satisfying word once committed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct RequirementState {
    pub counter: u64,
    pub length_bound: usize,
    pub satisfied: Option<(u64, Word)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum FireworksEvent {
    Satisfied {
        stage: u64,
        column: u64,
        j: u64,
        word: Word,
        by: SatisfiedBy,
    },
    /// `counter` and `length_bound` are the values after the update.
    Event {
        stage: u64,
        column: u64,
        j: u64,
        word: Word,
        common_prefix: usize,
        counter: u64,
        length_bound: usize,
    },
    CriticalSearch {
        stage: u64,
        column: u64,
        from_j: u64,
        found_j: Option<u64>,
        probes: u64,
    },
}

/// Why a run produced no point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Inconclusive {
    /// The critical search of `column` at `stage` can never succeed: every
    /// later entry of the column has been inspected.
    DeadSearch {
        column: u64,
        counter: u64,
        stage: u64,
    },
    FuelExhausted {
        stage: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FireworksRun {
    /// `Ok(prefix)`: the output point is `prefix·0^ω`.
    pub result: std::result::Result<Word, Inconclusive>,
    pub requirements: Vec<RequirementState>,
    pub stages: u64,
    #[serde(default)]
    pub trace: Vec<FireworksEvent>,
}

impl FireworksRun {
    pub fn point(&self) -> Option<CantorPoint> {
        self.result.as_ref().ok().map(|v| CantorPoint::padded(v, 0))
    }
}

/// Bound on the critical search.
#[derive(Debug, Clone, Copy)]
enum SearchLimit {
    /// Stop when the column provably has no further match.
    Exact,
    /// Give up after this many probes.
    Probes(u64),
}

enum Step {
    Continue,
    /// `dead`: every later entry was probed; otherwise the budget ran out.
    SearchFailed {
        dead: bool,
    },
}

struct Simulator<'a> {
    fam: &'a CeOpenFamily,
    advice: &'a [u64],
    v: Word,
    req: Vec<RequirementState>,
    quiet: Vec<u64>,
    trace: Vec<FireworksEvent>,
    used: u64,
}

impl<'a> Simulator<'a> {
    fn new(fam: &'a CeOpenFamily, advice: &'a [u64]) -> Self {
        let n = fam.len();
        Simulator {
            fam,
            advice,
            v: Word::empty(),
            req: vec![RequirementState::default(); n],
            quiet: vec![0; n],
            trace: Vec::new(),
            used: 0,
        }
    }

    /// Every requirement is satisfied or has seen a whole period of its
    /// column since the last change, after which nothing can change.
    fn finished(&self) -> bool {
        self.req.iter().enumerate().all(|(i, r)| {
            r.satisfied.is_some() || self.quiet[i] >= self.fam.columns[i].period() as u64
        })
    }

    fn set_v(&mut self, w: Word) {
        if w != self.v {
            self.v = w;
            self.quiet.iter_mut().for_each(|q| *q = 0);
        }
    }

    fn satisfy(&mut self, stage: u64, i: usize, j: u64, w: Word, by: SatisfiedBy) {
        self.req[i].satisfied = Some((j, w.clone()));
        self.trace.push(FireworksEvent::Satisfied {
            stage,
            column: i as u64,
            j,
            word: w,
            by,
        });
    }

    fn step(&mut self, stage: u64, limit: SearchLimit, fuel: u64) -> Step {
        let (i, j) = cantor_unpair(stage);
        let i_us = i as usize;
        if i_us >= self.fam.len() || self.req[i_us].satisfied.is_some() {
            return Step::Continue;
        }
        let col = &self.fam.columns[i_us];
        let mut changed = false;
        if let ColumnToken::Word(w) = col.at(j).clone() {
            if w.is_prefix_of(&self.v) {
                self.satisfy(stage, i_us, j, w, SatisfiedBy::Prefix);
                changed = true;
            } else if self.v.is_prefix_of(&w) {
                self.set_v(w.clone());
                self.satisfy(stage, i_us, j, w, SatisfiedBy::Extension);
                changed = true;
            } else {
                let common = self.v.common_prefix_len(&w);
                let r = &mut self.req[i_us];
                if common >= r.length_bound {
                    r.counter += 1;
                    r.length_bound = self.v.len();
                    let counter = r.counter;
                    self.trace.push(FireworksEvent::Event {
                        stage,
                        column: i,
                        j,
                        word: w,
                        common_prefix: common,
                        counter,
                        length_bound: self.v.len(),
                    });
                    changed = true;
                    if Some(counter) == self.advice.get(i_us).copied() {
                        if let Some(dead) = self.critical_search(stage, i_us, j, limit, fuel) {
                            return Step::SearchFailed { dead };
                        }
                    }
                }
            }
        }
        if changed {
            self.quiet[i_us] = 0;
        } else if j >= col.head().len() as u64 {
            self.quiet[i_us] += 1;
        }
        Step::Continue
    }

    /// `None` on success; otherwise whether the search is provably dead.
    fn critical_search(
        &mut self,
        stage: u64,
        i: usize,
        j: u64,
        limit: SearchLimit,
        fuel: u64,
    ) -> Option<bool> {
        let col = &self.fam.columns[i];
        // indices past `last` repeat values already probed
        let last = (j + 1).max(col.head().len() as u64) + col.period() as u64;
        let mut probes = 0u64;
        let mut jj = j + 1;
        loop {
            let stop = match limit {
                SearchLimit::Exact if jj > last => Some(true),
                SearchLimit::Exact if self.used >= fuel => Some(false),
                SearchLimit::Probes(m) if probes >= m => Some(false),
                _ => None,
            };
            if let Some(dead) = stop {
                self.trace.push(FireworksEvent::CriticalSearch {
                    stage,
                    column: i as u64,
                    from_j: j + 1,
                    found_j: None,
                    probes,
                });
                return Some(dead);
            }
            probes += 1;
            self.used += 1;
            if let ColumnToken::Word(w) = col.at(jj) {
                if self.v.is_prefix_of(w) {
                    let w = w.clone();
                    self.trace.push(FireworksEvent::CriticalSearch {
                        stage,
                        column: i as u64,
                        from_j: j + 1,
                        found_j: Some(jj),
                        probes,
                    });
                    self.set_v(w.clone());
                    self.satisfy(stage, i, jj, w, SatisfiedBy::CriticalSearch);
                    return None;
                }
            }
            jj += 1;
        }
    }
}

fn check_advice(fam: &CeOpenFamily, advice: &Advice) -> Result<()> {
    if advice.blocks.len() < fam.len() {
        return Err(Error::InvalidInstance(format!(
            "family has {} columns but advice has {} blocks",
            fam.len(),
            advice.blocks.len()
        )));
    }
    Advice::new(advice.k, advice.blocks.clone()).map(|_| ())
}

/// Runs the construction until every requirement is settled, a critical
/// search is seen to be dead, or `fuel` (stages plus search probes) runs out.
pub fn fireworks_1gen(fam: &CeOpenFamily, advice: &Advice, fuel: u64) -> Result<FireworksRun> {
    check_advice(fam, advice)?;
    let mut sim = Simulator::new(fam, &advice.blocks);
    let mut stage = 0u64;
    let result = loop {
        if sim.finished() {
            break Ok(sim.v.clone());
        }
        if sim.used >= fuel {
            break Err(Inconclusive::FuelExhausted { stage });
        }
        sim.used += 1;
        if let Step::SearchFailed { dead } = sim.step(stage, SearchLimit::Exact, fuel) {
            let (i, _) = cantor_unpair(stage);
            break Err(if dead {
                Inconclusive::DeadSearch {
                    column: i,
                    counter: sim.req[i as usize].counter,
                    stage,
                }
            } else {
                Inconclusive::FuelExhausted { stage }
            });
        }
        stage += 1;
    };
    Ok(FireworksRun {
        result,
        requirements: sim.req,
        stages: stage,
        trace: sim.trace,
    })
}

/// Fate of one advice path in the tree at level `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PathStatus {
    Kept,
    /// A critical search at `stage` needed more than `m` probes; the path is
    /// cut to length `length = h_stage`.
    Shortened {
        stage: u64,
        length: usize,
    },
}

/// `h_s`: total bit length of blocks `0..=s`.
pub fn tree_depth(k: u32, s: u64) -> usize {
    (0..=s as usize).map(|i| Advice::block_len(k, i)).sum()
}

/// Simulates stages `0..=m` on the advice path (blocks past the family's
/// columns are never read).
pub fn tree_path_status(fam: &CeOpenFamily, k: u32, m: u64, blocks: &[u64]) -> PathStatus {
    let mut sim = Simulator::new(fam, blocks);
    for stage in 0..=m {
        if let Step::SearchFailed { .. } = sim.step(stage, SearchLimit::Probes(m), u64::MAX) {
            return PathStatus::Shortened {
                stage,
                length: tree_depth(k, stage),
            };
        }
    }
    PathStatus::Kept
}

/// A path, identified by the blocks the family reads, cut below full depth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortenedPath {
    pub blocks: Vec<u64>,
    pub stage: u64,
    pub length: usize,
}

/// The tree `T_m`: all advice paths of length `h_m`, each kept in full or cut
/// to `h_s`. Blocks the family never reads do not affect a path's fate, so
/// paths are grouped by their first `relevant` blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeApprox {
    pub k: u32,
    pub m: u64,
    pub depth: usize,
    pub relevant: usize,
    pub shortened: Vec<ShortenedPath>,
}

impl TreeApprox {
    fn cut_length(&self, blocks: &[u64]) -> usize {
        self.shortened
            .iter()
            .find(|p| p.blocks == blocks)
            .map_or(self.depth, |p| p.length)
    }

    /// True when `word` is a prefix of a kept part of some path.
    pub fn contains(&self, word: &Word) -> bool {
        if word.len() > self.depth {
            return false;
        }
        let mut ranges = Vec::with_capacity(self.relevant);
        let mut at = 0;
        for i in 0..self.relevant {
            let len = Advice::block_len(self.k, i);
            let known = word.len().saturating_sub(at).min(len);
            let bits = &word.bits()[at.min(word.len())..at.min(word.len()) + known];
            let fixed = bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
            let free = len - known;
            ranges.push(((fixed << free) + 1)..=((fixed << free) + (1u64 << free)));
            at += len;
        }
        let mut stack: Vec<Vec<u64>> = vec![Vec::new()];
        while let Some(prefix) = stack.pop() {
            if prefix.len() == self.relevant {
                if self.cut_length(&prefix) >= word.len() {
                    return true;
                }
                continue;
            }
            for n in ranges[prefix.len()].clone() {
                let mut next = prefix.clone();
                next.push(n);
                stack.push(next);
            }
        }
        false
    }

    /// Number of full-length kept paths.
    pub fn kept_paths(&self) -> u128 {
        let relevant_bits = match self.relevant {
            0 => 0,
            r => tree_depth(self.k, r as u64 - 1),
        };
        let group = 1u128 << (self.depth - relevant_bits);
        (1u128 << self.depth) - group * self.shortened.len() as u128
    }
}

/// All relevant block tuples for `count` columns.
pub(crate) fn all_tuples(k: u32, count: usize) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for i in 0..count {
        let top = Advice::block_range(k, i);
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=top).map(move |n| {
                    let mut next = t.clone();
                    next.push(n);
                    next
                })
            })
            .collect();
    }
    out
}

/// Builds `T_m` by simulating every relevant block tuple. A failure at
/// stage `m` cuts to `h_m`, the full depth, so such paths stay whole.
pub fn fireworks_tree(fam: &CeOpenFamily, k: u32, m: u64, exec: Executor) -> TreeApprox {
    let depth = tree_depth(k, m);
    let relevant = fam.len().min(m as usize + 1);
    let tuples = all_tuples(k, relevant);
    let statuses = exec.map(tuples, |t| {
        let status = tree_path_status(fam, k, m, &t);
        (t, status)
    });
    let shortened = statuses
        .into_iter()
        .filter_map(|(blocks, s)| match s {
            PathStatus::Kept => None,
            PathStatus::Shortened { stage, length } => (length < depth).then_some(ShortenedPath {
                blocks,
                stage,
                length,
            }),
        })
        .collect();
    TreeApprox {
        k,
        m,
        depth,
        relevant,
        shortened,
    }
}
