//! Closed subsets of Baire space over a finite alphabet `{0..=bound}`, named
//! by negative information.

use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::point::{BairePoint, BaireWord};
use crate::error::{Error, Result};
use crate::names::FiniteGen;

/// Removal token over Baire words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BaireToken {
    Word(BaireWord),
    NoBall,
}

impl BaireToken {
    pub fn word(&self) -> Option<&BaireWord> {
        match self {
            BaireToken::Word(w) => Some(w),
            BaireToken::NoBall => None,
        }
    }
}

impl Serialize for BaireToken {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BaireToken::NoBall => s.serialize_str("-"),
            BaireToken::Word(w) => w.serialize(s),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawBaireToken {
    Sentinel(String),
    Word(BaireWord),
}

impl<'de> Deserialize<'de> for BaireToken {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match RawBaireToken::deserialize(d)? {
            RawBaireToken::Sentinel(s) if s == "-" => Ok(BaireToken::NoBall),
            RawBaireToken::Sentinel(s) => Err(serde::de::Error::custom(format!(
                "unknown Baire token {s:?}"
            ))),
            RawBaireToken::Word(w) => Ok(BaireToken::Word(w)),
        }
    }
}

/// An enumeration of removed Baire balls.
pub trait BaireWordEnum: Send + Sync {
    fn token(&self, index: u64) -> BaireToken;
}

/// Tail rule of a finitely generated Baire removal stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaireTail {
    Constant(BaireToken),
    Cycle(Vec<BaireToken>),
    /// Tail position `t` holds the `t`-th word over the alphabet when no
    /// listed point extends it, and `NoBall` otherwise.
    Outside {
        points: Vec<BairePoint>,
    },
}

/// Finitely generated Baire removal stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawBaireSpec")]
pub struct BaireStreamSpec {
    bound: u64,
    head: Vec<BaireToken>,
    tail: BaireTail,
}

#[derive(Deserialize)]
struct RawBaireSpec {
    bound: u64,
    #[serde(default)]
    head: Vec<BaireToken>,
    tail: BaireTail,
}

impl TryFrom<RawBaireSpec> for BaireStreamSpec {
    type Error = Error;

    fn try_from(raw: RawBaireSpec) -> Result<Self> {
        BaireStreamSpec::new(raw.bound, raw.head, raw.tail)
    }
}

fn symbols_in_bound(values: &[u64], bound: u64) -> bool {
    values.iter().all(|&v| v <= bound)
}

impl BaireStreamSpec {
    pub fn new(bound: u64, head: Vec<BaireToken>, tail: BaireTail) -> Result<Self> {
        let token_ok = |t: &BaireToken| t.word().is_none_or(|w| symbols_in_bound(&w.0, bound));
        if !head.iter().all(token_ok) {
            return Err(Error::InvalidInstance(format!(
                "head word exceeds alphabet bound {bound}"
            )));
        }
        match &tail {
            BaireTail::Constant(t) if !token_ok(t) => {
                return Err(Error::InvalidInstance(format!(
                    "tail word exceeds alphabet bound {bound}"
                )))
            }
            BaireTail::Cycle(c) if c.is_empty() => return Err(Error::EmptyCycle),
            BaireTail::Cycle(c) if !c.iter().all(token_ok) => {
                return Err(Error::InvalidInstance(format!(
                    "tail word exceeds alphabet bound {bound}"
                )))
            }
            BaireTail::Outside { points }
                if !points.iter().all(|p| {
                    symbols_in_bound(p.head(), bound) && symbols_in_bound(&p.tail_values(), bound)
                }) =>
            {
                return Err(Error::InvalidInstance(format!(
                    "point exceeds alphabet bound {bound}"
                )))
            }
            _ => {}
        }
        Ok(BaireStreamSpec { bound, head, tail })
    }

    /// Removal of every ball missing the listed points, after `head`.
    pub fn outside(bound: u64, head: Vec<BaireToken>, points: Vec<BairePoint>) -> Result<Self> {
        Self::new(bound, head, BaireTail::Outside { points })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn head(&self) -> &[BaireToken] {
        &self.head
    }

    pub fn tail(&self) -> &BaireTail {
        &self.tail
    }

    pub fn at(&self, index: u64) -> BaireToken {
        let h = self.head.len() as u64;
        if index < h {
            return self.head[index as usize].clone();
        }
        let t = index - h;
        match &self.tail {
            BaireTail::Constant(c) => c.clone(),
            BaireTail::Cycle(c) => c[(t % c.len() as u64) as usize].clone(),
            BaireTail::Outside { points } => {
                let w = BaireWord::from_number(t, self.bound);
                if points.iter().any(|p| baire_extends(p, &w)) {
                    BaireToken::NoBall
                } else {
                    BaireToken::Word(w)
                }
            }
        }
    }
}

impl BaireWordEnum for BaireStreamSpec {
    fn token(&self, index: u64) -> BaireToken {
        self.at(index)
    }
}

/// The point lies in the ball `w·ℕ^ℕ`.
pub fn baire_extends(p: &BairePoint, w: &BaireWord) -> bool {
    w.0.iter().enumerate().all(|(i, &a)| *p.at(i as u64) == a)
}

/// True when `x·{0..=bound}^ℕ` is covered by the balls of `words`.
pub fn baire_covers(words: &[BaireWord], x: &BaireWord, bound: u64) -> bool {
    let relevant: Vec<&BaireWord> = words.iter().filter(|w| w.compatible(x)).collect();
    baire_covers_rec(&relevant, x, bound)
}

fn baire_covers_rec(relevant: &[&BaireWord], x: &BaireWord, bound: u64) -> bool {
    if relevant.is_empty() {
        return false;
    }
    if relevant.iter().any(|w| w.is_prefix_of(x)) {
        return true;
    }
    (0..=bound).all(|a| {
        let mut child = x.clone();
        child.0.push(a);
        let sub: Vec<&BaireWord> = relevant
            .iter()
            .copied()
            .filter(|w| w.compatible(&child))
            .collect();
        baire_covers_rec(&sub, &child, bound)
    })
}

/// All words of length `len` over `{0..=bound}` in lexicographic order.
pub fn baire_words_of_length(len: usize, bound: u64) -> Vec<BaireWord> {
    let mut out = vec![BaireWord::default()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..=bound).map(move |a| {
                    let mut c = w.clone();
                    c.0.push(a);
                    c
                })
            })
            .collect();
    }
    out
}

/// Closed subset of `{0..=bound}^ℕ` named by removed balls.
#[derive(Clone)]
pub struct BaireNegClosedSet {
    bound: u64,
    inner: Arc<dyn BaireWordEnum>,
}

impl BaireNegClosedSet {
    pub fn new(bound: u64, inner: Arc<dyn BaireWordEnum>) -> Self {
        BaireNegClosedSet { bound, inner }
    }

    pub fn from_spec(spec: BaireStreamSpec) -> Self {
        BaireNegClosedSet {
            bound: spec.bound,
            inner: Arc::new(spec),
        }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn token(&self, index: u64) -> BaireToken {
        self.inner.token(index)
    }

    pub fn removed_words(&self, fuel: u64) -> Vec<BaireWord> {
        (0..fuel)
            .filter_map(|i| self.token(i).word().cloned())
            .collect()
    }

    /// Depth-`depth` words over the alphabet not covered by the first `fuel` removals.
    pub fn depth_truncate(&self, depth: usize, fuel: u64) -> Vec<BaireWord> {
        let removed = self.removed_words(fuel);
        baire_words_of_length(depth, self.bound)
            .into_iter()
            .filter(|x| !baire_covers(&removed, x, self.bound))
            .collect()
    }
}

/// A constant Baire point.
pub fn baire_constant(value: u64) -> BairePoint {
    FiniteGen::constant(value)
}
