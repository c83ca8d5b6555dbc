//! Closed subsets of Cantor space under four representations, and the
//! conversions between them.
//!
//! | type | name content | denotes |
//! |------|--------------|---------|
//! | [`NegClosedSet`] | removed words | `2^ℕ` minus the removed balls |
//! | [`PosClosedSet`] | points or `∞` | closure of the listed points |
//! | [`ClusterClosedSet`] | points or `∞` | cluster points of the list |
//! | [`SharpClosedSet`] | words not in `E` | `2^ℕ` minus the balls of `E` |
//! | [`NegClosedSetJump`] | converging word columns | removal of the column limits |

mod converters;
mod sharp;
mod spec;
pub(crate) mod staged;

use std::collections::BTreeSet;
use std::sync::Arc;

pub use converters::{
    boundary_negjump, boundary_superset, cluster_to_closure, cluster_to_negjump,
    negjump_to_cluster, pos_to_negjump, sharp_to_negjump, CLUSTER_EVIDENCE_DIVISOR,
};
pub use sharp::{negjump_to_sharp, priority_run, PriorityEvent, PriorityRun};
pub use spec::{
    ClosedSetFile, ClosedSetSpec, NegJumpSpec, OutsideSpec, PointStreamSpec, PointTail, Repr,
    WordStreamSpec, WordTail,
};

use crate::names::{Name, NameStream, Outcome};
use crate::spaces::{uncovered_words, CantorPoint, PointToken, Token, Word};

/// An enumeration of word tokens.
pub trait WordEnum: Send + Sync {
    fn token(&self, index: u64) -> Token;

    /// Least position `< limit` holding a word compatible with `v`.
    fn first_compatible(&self, v: &Word, limit: u64) -> Option<(u64, Word)> {
        (0..limit).find_map(|i| match self.token(i) {
            Token::Word(u) if u.compatible(v) => Some((i, u)),
            _ => None,
        })
    }
}

/// An enumeration of point tokens.
pub trait PointEnum: Send + Sync {
    fn point(&self, index: u64) -> PointToken;
}

/// A double list of word tokens: `entry(column, stage)`.
pub trait JumpEnum: Send + Sync {
    fn entry(&self, column: u64, stage: u64) -> Token;

    /// Columns `0..columns` at `stage`.
    fn snapshot(&self, stage: u64, columns: u64) -> Vec<Token> {
        (0..columns).map(|c| self.entry(c, stage)).collect()
    }
}

fn words_of(tokens: impl IntoIterator<Item = Token>) -> Vec<Word> {
    tokens
        .into_iter()
        .filter_map(|t| match t {
            Token::Word(w) => Some(w),
            Token::NoBall => None,
        })
        .collect()
}

/// Closed set named by negative information.
#[derive(Clone)]
pub struct NegClosedSet(Arc<dyn WordEnum>);

impl NegClosedSet {
    pub fn new(inner: Arc<dyn WordEnum>) -> Self {
        NegClosedSet(inner)
    }

    pub fn from_spec(spec: WordStreamSpec) -> Self {
        NegClosedSet(Arc::new(spec))
    }

    /// The set with nothing removed.
    pub fn whole_space() -> Self {
        NegClosedSet::from_spec(WordStreamSpec::constant(Token::NoBall))
    }

    /// The empty set, with `ε` removed first.
    pub fn empty_set() -> Self {
        NegClosedSet::from_spec(WordStreamSpec::listed(
            vec![Token::Word(Word::empty())],
            Token::NoBall,
        ))
    }

    pub fn token(&self, index: u64) -> Token {
        self.0.token(index)
    }

    pub fn first_compatible(&self, v: &Word, limit: u64) -> Option<(u64, Word)> {
        self.0.first_compatible(v, limit)
    }

    /// Words removed among the first `fuel` tokens.
    pub fn removed_words(&self, fuel: u64) -> Vec<Word> {
        words_of((0..fuel).map(|i| self.token(i)))
    }

    /// Depth-`depth` words still consistent after reading `fuel` tokens.
    /// Shrinks as fuel grows.
    pub fn depth_truncate(&self, depth: usize, fuel: u64) -> BTreeSet<Word> {
        uncovered_words(&self.removed_words(fuel), depth)
            .into_iter()
            .collect()
    }

    /// The removal stream as a name: `0` is `NoBall`, `n + 1` the word numbered `n`.
    pub fn as_name(&self) -> Name {
        Arc::new(TokenCodes(self.0.clone()))
    }
}

struct TokenCodes(Arc<dyn WordEnum>);

impl NameStream for TokenCodes {
    fn query(&self, index: u64, _fuel: u64) -> Outcome<u64> {
        Outcome::Value(self.0.token(index).code())
    }
}

/// Closed set named by a dense point list.
#[derive(Clone)]
pub struct PosClosedSet(Arc<dyn PointEnum>);

impl PosClosedSet {
    pub fn new(inner: Arc<dyn PointEnum>) -> Self {
        PosClosedSet(inner)
    }

    pub fn from_spec(spec: PointStreamSpec) -> Self {
        PosClosedSet(Arc::new(spec))
    }

    pub fn empty_set() -> Self {
        PosClosedSet::from_spec(PointStreamSpec::constant(PointToken::Inf))
    }

    pub fn point(&self, index: u64) -> PointToken {
        self.0.point(index)
    }

    pub fn points(&self, fuel: u64) -> Vec<CantorPoint> {
        (0..fuel)
            .filter_map(|i| self.point(i).point().cloned())
            .collect()
    }

    /// Depth-`depth` prefixes of the first `fuel` points. Grows with fuel.
    pub fn depth_truncate(&self, depth: usize, fuel: u64) -> BTreeSet<Word> {
        self.points(fuel).iter().map(|p| p.prefix(depth)).collect()
    }

    pub(crate) fn inner(&self) -> Arc<dyn PointEnum> {
        self.0.clone()
    }
}

/// Closed set named by the cluster points of a point list.
#[derive(Clone)]
pub struct ClusterClosedSet(Arc<dyn PointEnum>);

impl ClusterClosedSet {
    pub fn new(inner: Arc<dyn PointEnum>) -> Self {
        ClusterClosedSet(inner)
    }

    pub fn from_spec(spec: PointStreamSpec) -> Self {
        ClusterClosedSet(Arc::new(spec))
    }

    pub fn point(&self, index: u64) -> PointToken {
        self.0.point(index)
    }

    /// Depth-`depth` words entered by a point with index in
    /// `[fuel / CLUSTER_EVIDENCE_DIVISOR, fuel)`.
    pub fn depth_truncate(&self, depth: usize, fuel: u64) -> BTreeSet<Word> {
        (fuel / CLUSTER_EVIDENCE_DIVISOR..fuel)
            .filter_map(|i| self.point(i).point().map(|p| p.prefix(depth)))
            .collect()
    }

    pub(crate) fn inner(&self) -> Arc<dyn PointEnum> {
        self.0.clone()
    }
}

/// Closed set `2^ℕ \ ∪_{v ∈ E} v·2^ℕ` named by enumerating the words outside `E`.
#[derive(Clone)]
pub struct SharpClosedSet(Arc<dyn WordEnum>);

impl SharpClosedSet {
    pub fn new(inner: Arc<dyn WordEnum>) -> Self {
        SharpClosedSet(inner)
    }

    pub fn from_spec(spec: WordStreamSpec) -> Self {
        SharpClosedSet(Arc::new(spec))
    }

    pub fn token(&self, index: u64) -> Token {
        self.0.token(index)
    }

    /// Words numbered below `fuel / 2` that are not among the first `fuel`
    /// tokens; the lag leaves room for words a listing reaches late.
    pub fn unlisted_words(&self, fuel: u64) -> Vec<Word> {
        let listed: BTreeSet<Word> = words_of((0..fuel).map(|i| self.token(i)))
            .into_iter()
            .collect();
        (0..fuel / 2)
            .map(Word::from_number)
            .filter(|v| !listed.contains(v))
            .collect()
    }

    /// Depth-`depth` words not covered by [`SharpClosedSet::unlisted_words`].
    pub fn depth_truncate(&self, depth: usize, fuel: u64) -> BTreeSet<Word> {
        uncovered_words(&self.unlisted_words(fuel), depth)
            .into_iter()
            .collect()
    }
}

/// A converging double list of removed words: column `i` converges to the
/// `i`-th removed ball.
#[derive(Clone)]
pub struct NegClosedSetJump(Arc<dyn JumpEnum>);

impl NegClosedSetJump {
    pub fn new(inner: Arc<dyn JumpEnum>) -> Self {
        NegClosedSetJump(inner)
    }

    pub fn from_spec(spec: NegJumpSpec) -> Self {
        NegClosedSetJump(Arc::new(spec))
    }

    pub fn entry(&self, column: u64, stage: u64) -> Token {
        self.0.entry(column, stage)
    }

    pub fn snapshot(&self, stage: u64, columns: u64) -> Vec<Token> {
        self.0.snapshot(stage, columns)
    }

    /// Stage-`stage` approximation restricted to columns `0..columns`.
    pub fn stage_words(&self, stage: u64, columns: u64) -> Vec<Word> {
        words_of(self.snapshot(stage, columns))
    }

    /// Depth-`depth` words consistent with columns `0..fuel` at stage `fuel`.
    pub fn depth_truncate(&self, depth: usize, fuel: u64) -> BTreeSet<Word> {
        uncovered_words(&self.stage_words(fuel, fuel), depth)
            .into_iter()
            .collect()
    }

    /// For each column below `columns`, the last stage `<= horizon` at which
    /// its value changed (0 if it never changed).
    pub fn observed_stabilization(&self, columns: u64, horizon: u64) -> Vec<u64> {
        let mut last = vec![0u64; columns as usize];
        let mut prev = self.snapshot(0, columns);
        for stage in 1..=horizon {
            let cur = self.snapshot(stage, columns);
            for (c, (a, b)) in prev.iter().zip(&cur).enumerate() {
                if a != b {
                    last[c] = stage;
                }
            }
            prev = cur;
        }
        last
    }

    /// Total number of value changes in columns `0..columns` up to `horizon`.
    pub fn column_changes(&self, columns: u64, horizon: u64) -> u64 {
        let mut changes = 0;
        let mut prev = self.snapshot(0, columns);
        for stage in 1..=horizon {
            let cur = self.snapshot(stage, columns);
            changes += prev.iter().zip(&cur).filter(|(a, b)| a != b).count() as u64;
            prev = cur;
        }
        changes
    }
}

/// Any closed-set value, for representation-agnostic tooling.
#[derive(Clone)]
pub enum ClosedSet {
    Neg(NegClosedSet),
    Pos(PosClosedSet),
    Cluster(ClusterClosedSet),
    Sharp(SharpClosedSet),
    NegJump(NegClosedSetJump),
}

impl ClosedSet {
    /// Depth-`depth` words consistent with the information available within `fuel`.
    pub fn depth_truncate(&self, depth: usize, fuel: u64) -> BTreeSet<Word> {
        match self {
            ClosedSet::Neg(s) => s.depth_truncate(depth, fuel),
            ClosedSet::Pos(s) => s.depth_truncate(depth, fuel),
            ClosedSet::Cluster(s) => s.depth_truncate(depth, fuel),
            ClosedSet::Sharp(s) => s.depth_truncate(depth, fuel),
            ClosedSet::NegJump(s) => s.depth_truncate(depth, fuel),
        }
    }

    pub fn repr(&self) -> Repr {
        match self {
            ClosedSet::Neg(_) => Repr::Neg,
            ClosedSet::Pos(_) => Repr::Pos,
            ClosedSet::Cluster(_) => Repr::Cluster,
            ClosedSet::Sharp(_) => Repr::Sharp,
            ClosedSet::NegJump(_) => Repr::Negjump,
        }
    }
}

pub fn depth_truncate(set: &ClosedSet, depth: usize, fuel: u64) -> BTreeSet<Word> {
    set.depth_truncate(depth, fuel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::w;

    #[test]
    fn neg_no_removals() {
        let all = NegClosedSet::whole_space().depth_truncate(2, 100);
        assert_eq!(
            all,
            [w("00"), w("01"), w("10"), w("11")].into_iter().collect()
        );
    }

    #[test]
    fn pos_single_point() {
        let spec =
            PointStreamSpec::constant(PointToken::Point(CantorPoint::padded(&Word::empty(), 0)));
        let got = PosClosedSet::from_spec(spec).depth_truncate(2, 10);
        assert_eq!(got, [w("00")].into_iter().collect());
    }

    #[test]
    fn polarity_monotonicity() {
        let neg = NegClosedSet::from_spec(WordStreamSpec::listed(
            vec![w("1").into(), w("01").into()],
            Token::NoBall,
        ));
        let mut prev = neg.depth_truncate(3, 0);
        for fuel in 1..6 {
            let cur = neg.depth_truncate(3, fuel);
            assert!(cur.is_subset(&prev));
            prev = cur;
        }
        let pos = PosClosedSet::from_spec(PointStreamSpec::dense(vec![w("0")]));
        let mut prev = pos.depth_truncate(3, 0);
        for fuel in 1..20 {
            let cur = pos.depth_truncate(3, fuel);
            assert!(prev.is_subset(&cur));
            prev = cur;
        }
    }

    #[test]
    fn token_codes_name() {
        let neg = NegClosedSet::empty_set();
        assert_eq!(neg.as_name().query(0, 1), Outcome::Value(1));
        assert_eq!(neg.as_name().query(1, 1), Outcome::Value(0));
    }
}
