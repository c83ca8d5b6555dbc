//! Fuel-bounded name streams, the Cantor pairing codecs, the limit operation
//! and the two revisable-output contracts.
//!
//! Every infinite object in the crate is ultimately a [`NameStream`]: a map from
//! `(index, fuel)` to a three-valued [`Outcome`]. Finite budgets replace
//! nontermination, so a search that would diverge reports `Inconclusive`.

use std::fmt;
use std::sync::Arc;

use num_integer::Roots;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Result of a fuel-bounded query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome<T> {
    Value(T),
    Inconclusive,
}

impl<T> Outcome<T> {
    pub fn is_value(&self) -> bool {
        matches!(self, Outcome::Value(_))
    }

    pub fn value(self) -> Option<T> {
        match self {
            Outcome::Value(v) => Some(v),
            Outcome::Inconclusive => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Value(v) => Outcome::Value(f(v)),
            Outcome::Inconclusive => Outcome::Inconclusive,
        }
    }
}

impl<T> From<Option<T>> for Outcome<T> {
    fn from(value: Option<T>) -> Self {
        value.map_or(Outcome::Inconclusive, Outcome::Value)
    }
}

/// A demand-driven sequence of naturals.
///
/// Implementations must be deterministic and monotone in fuel: once a query
/// answers `Value(v)` at some fuel, it answers `Value(v)` at every larger fuel.
pub trait NameStream: Send + Sync {
    fn query(&self, index: u64, fuel: u64) -> Outcome<u64>;
}

/// Shared handle to a name stream.
pub type Name = Arc<dyn NameStream>;

/// Tail rule of a finitely generated sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail<T> {
    RepeatLast,
    Constant(T),
    Cycle(Vec<T>),
}

/// A finite head followed by a periodic tail: the finite encoding of an
/// eventually periodic infinite sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(
    try_from = "RawGen<T>",
    bound(deserialize = "T: Deserialize<'de> + Clone")
)]
pub struct FiniteGen<T> {
    head: Vec<T>,
    tail: Tail<T>,
}

#[derive(Deserialize)]
struct RawGen<T> {
    #[serde(default = "Vec::new")]
    head: Vec<T>,
    tail: Tail<T>,
}

impl<T: Clone> TryFrom<RawGen<T>> for FiniteGen<T> {
    type Error = Error;

    fn try_from(raw: RawGen<T>) -> Result<Self> {
        FiniteGen::new(raw.head, raw.tail)
    }
}

impl<T: Clone> FiniteGen<T> {
    pub fn new(head: Vec<T>, tail: Tail<T>) -> Result<Self> {
        match &tail {
            Tail::RepeatLast if head.is_empty() => return Err(Error::RepeatLastWithoutHead),
            Tail::Cycle(c) if c.is_empty() => return Err(Error::EmptyCycle),
            _ => {}
        }
        Ok(FiniteGen { head, tail })
    }

    pub fn constant(value: T) -> Self {
        FiniteGen {
            head: Vec::new(),
            tail: Tail::Constant(value),
        }
    }

    /// `head` followed by `fill` forever.
    pub fn padded(head: Vec<T>, fill: T) -> Self {
        FiniteGen {
            head,
            tail: Tail::Constant(fill),
        }
    }

    pub fn cycle(head: Vec<T>, cycle: Vec<T>) -> Result<Self> {
        Self::new(head, Tail::Cycle(cycle))
    }

    pub fn head(&self) -> &[T] {
        &self.head
    }

    pub fn tail(&self) -> &Tail<T> {
        &self.tail
    }

    pub fn at(&self, index: u64) -> &T {
        let h = self.head.len() as u64;
        if index < h {
            return &self.head[index as usize];
        }
        let t = index - h;
        match &self.tail {
            Tail::RepeatLast => self.head.last().expect("validated non-empty head"),
            Tail::Constant(c) => c,
            Tail::Cycle(c) => &c[(t % c.len() as u64) as usize],
        }
    }

    pub fn prefix(&self, len: usize) -> Vec<T> {
        (0..len as u64).map(|i| self.at(i).clone()).collect()
    }

    /// Length of the tail's period (1 for constant tails).
    pub fn period(&self) -> usize {
        match &self.tail {
            Tail::Cycle(c) => c.len(),
            _ => 1,
        }
    }

    /// Values that occur infinitely often.
    pub fn tail_values(&self) -> Vec<T> {
        match &self.tail {
            Tail::RepeatLast => vec![self.head.last().expect("validated").clone()],
            Tail::Constant(c) => vec![c.clone()],
            Tail::Cycle(c) => c.clone(),
        }
    }

    /// Every index `>= self.settled_len()` repeats an earlier index with the
    /// same residue modulo the period.
    pub fn settled_len(&self) -> usize {
        self.head.len() + self.period()
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> FiniteGen<U> {
        let head = self.head.iter().map(&f).collect();
        let tail = match &self.tail {
            Tail::RepeatLast => Tail::RepeatLast,
            Tail::Constant(c) => Tail::Constant(f(c)),
            Tail::Cycle(c) => Tail::Cycle(c.iter().map(&f).collect()),
        };
        FiniteGen { head, tail }
    }
}

impl NameStream for FiniteGen<u64> {
    fn query(&self, index: u64, _fuel: u64) -> Outcome<u64> {
        Outcome::Value(*self.at(index))
    }
}

/// Cantor pairing `(n + k + 1)(n + k) / 2 + k`.
///
/// Panics if the code does not fit in a `u64`.
pub fn cantor_pair(n: u64, k: u64) -> u64 {
    let s = n as u128 + k as u128;
    let code = (s + 1) * s / 2 + k as u128;
    u64::try_from(code).expect("cantor_pair overflow")
}

/// Exact inverse of [`cantor_pair`].
pub fn cantor_unpair(code: u64) -> (u64, u64) {
    let m = code as u128;
    let mut w = ((8 * m + 1).sqrt() - 1) / 2;
    while (w + 1) * (w + 2) / 2 <= m {
        w += 1;
    }
    while w * (w + 1) / 2 > m {
        w -= 1;
    }
    let k = m - w * (w + 1) / 2;
    ((w - k) as u64, k as u64)
}

/// `out(2k) = even(k)`, `out(2k + 1) = odd(k)`.
pub struct Interleave {
    even: Name,
    odd: Name,
}

impl NameStream for Interleave {
    fn query(&self, index: u64, fuel: u64) -> Outcome<u64> {
        if index.is_multiple_of(2) {
            self.even.query(index / 2, fuel)
        } else {
            self.odd.query(index / 2, fuel)
        }
    }
}

pub fn interleave_pair(p: Name, q: Name) -> Name {
    Arc::new(Interleave { even: p, odd: q })
}

/// `out(i) = src(offset + i * step)`.
pub struct Subsequence {
    src: Name,
    offset: u64,
    step: u64,
}

impl NameStream for Subsequence {
    fn query(&self, index: u64, fuel: u64) -> Outcome<u64> {
        self.src.query(self.offset + index * self.step, fuel)
    }
}

pub fn subsequence(src: Name, offset: u64, step: u64) -> Name {
    Arc::new(Subsequence { src, offset, step })
}

/// Inverse of [`interleave_pair`].
pub fn split_pair(t: Name) -> (Name, Name) {
    (subsequence(t.clone(), 0, 2), subsequence(t, 1, 2))
}

/// `out(0) = k`, `out(i + 1) = rest(i)`.
pub struct Prepend {
    first: u64,
    rest: Name,
}

impl NameStream for Prepend {
    fn query(&self, index: u64, fuel: u64) -> Outcome<u64> {
        match index {
            0 => Outcome::Value(self.first),
            i => self.rest.query(i - 1, fuel),
        }
    }
}

pub fn prepend(first: u64, rest: Name) -> Name {
    Arc::new(Prepend { first, rest })
}

/// Inverse of [`prepend`].
pub fn unprepend(t: Name, fuel: u64) -> (Outcome<u64>, Name) {
    (t.query(0, fuel), subsequence(t, 1, 1))
}

/// Source of the rows of an infinite tuple.
#[derive(Clone)]
pub enum Rows {
    /// Listed rows; indices past the end repeat the last row.
    Listed(Vec<Name>),
    Computed(Arc<dyn Fn(u64) -> Name + Send + Sync>),
}

impl Rows {
    pub fn row(&self, i: u64) -> Name {
        match self {
            Rows::Listed(rows) => {
                let idx = (i as usize).min(rows.len() - 1);
                rows[idx].clone()
            }
            Rows::Computed(f) => f(i),
        }
    }
}

/// `out(<i, j>) = rows(i)(j)`.
pub struct Tuple {
    rows: Rows,
}

impl NameStream for Tuple {
    fn query(&self, index: u64, fuel: u64) -> Outcome<u64> {
        let (i, j) = cantor_unpair(index);
        self.rows.row(i).query(j, fuel)
    }
}

pub fn tuple_infinite(rows: Rows) -> Result<Name> {
    if let Rows::Listed(r) = &rows {
        if r.is_empty() {
            return Err(Error::InvalidInstance(
                "tuple needs at least one row".into(),
            ));
        }
    }
    Ok(Arc::new(Tuple { rows }))
}

/// `out(j) = t(<row, j>)`, the inverse of [`tuple_infinite`].
pub struct Project {
    src: Name,
    row: u64,
}

impl NameStream for Project {
    fn query(&self, index: u64, fuel: u64) -> Outcome<u64> {
        self.src.query(cantor_pair(self.row, index), fuel)
    }
}

pub fn project(t: Name, row: u64) -> Name {
    Arc::new(Project { src: t, row })
}

/// Limit of the rows encoded in `t` at `coordinate`.
///
/// With a declared stabilization stage `s`, rows `0..fuel` are inspected and
/// the answer is row `s` once `fuel > s`. Without a declaration the limit is
/// never certified.
pub fn lim_eval(
    t: &dyn NameStream,
    coordinate: u64,
    fuel: u64,
    declared: Option<u64>,
) -> Outcome<u64> {
    match declared {
        Some(stage) if fuel > stage => t.query(cantor_pair(stage, coordinate), fuel),
        _ => Outcome::Inconclusive,
    }
}

/// Replays rows `declared..=horizon` at `coordinate`; true when they agree.
pub fn replay_limit(
    t: &dyn NameStream,
    coordinate: u64,
    declared: u64,
    horizon: u64,
    fuel: u64,
) -> bool {
    let anchor = t.query(cantor_pair(declared, coordinate), fuel);
    anchor.is_value()
        && (declared..=horizon).all(|row| t.query(cantor_pair(row, coordinate), fuel) == anchor)
}

/// Decoded state of a finitely revisable answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MindChange {
    NoGuess,
    Guess { guess: u64, changes: u64 },
}

/// A stream of guesses; index `i` is the answer after stage `i`.
#[derive(Clone)]
pub struct MindChangeStream {
    guesses: Name,
}

impl MindChangeStream {
    pub fn new(guesses: Name) -> Self {
        MindChangeStream { guesses }
    }

    /// Guesses observed in stages `0..stages.len()`; later stages are
    /// inconclusive.
    pub fn from_stages(stages: Vec<u64>) -> Self {
        MindChangeStream {
            guesses: Arc::new(StageList(stages)),
        }
    }

    pub fn guesses(&self) -> &Name {
        &self.guesses
    }

    /// Latest guess visible within `fuel` stages and the number of revisions.
    pub fn read(&self, fuel: u64) -> MindChange {
        let mut state = MindChange::NoGuess;
        for i in 0..fuel {
            let Outcome::Value(g) = self.guesses.query(i, fuel) else {
                break;
            };
            state = match state {
                MindChange::NoGuess => MindChange::Guess {
                    guess: g,
                    changes: 0,
                },
                MindChange::Guess { guess, changes } if guess != g => MindChange::Guess {
                    guess: g,
                    changes: changes + 1,
                },
                unchanged => unchanged,
            };
        }
        state
    }
}

impl fmt::Debug for MindChangeStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("MindChangeStream")
    }
}

pub fn mind_change_read(s: &MindChangeStream, fuel: u64) -> MindChange {
    s.read(fuel)
}

/// Values computed for stages `0..len`; later stages are inconclusive.
struct StageList(Vec<u64>);

impl NameStream for StageList {
    fn query(&self, index: u64, fuel: u64) -> Outcome<u64> {
        if index < fuel {
            self.0.get(index as usize).copied().into()
        } else {
            Outcome::Inconclusive
        }
    }
}

/// Per-stage outputs of a limit-level realizer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuessStream<T> {
    stages: Vec<T>,
}

impl<T: Clone + PartialEq> GuessStream<T> {
    pub fn new(stages: Vec<T>) -> Self {
        GuessStream { stages }
    }

    pub fn stages(&self) -> &[T] {
        &self.stages
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn last(&self) -> Option<&T> {
        self.stages.last()
    }

    /// First stage from which every later stage repeats the final value.
    pub fn settled_from(&self) -> Option<usize> {
        let last = self.stages.last()?;
        let mut from = self.stages.len() - 1;
        while from > 0 && self.stages[from - 1] == *last {
            from -= 1;
        }
        Some(from)
    }

    /// Number of stages whose value differs from the previous stage.
    pub fn revisions(&self) -> usize {
        self.stages.windows(2).filter(|w| w[0] != w[1]).count()
    }
}
