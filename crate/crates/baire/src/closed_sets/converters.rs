//! Conversions between the closed-set representations. Jump-level outputs
//! are double lists whose column `c` carries the word numbered `c`.

use std::collections::HashSet;
use std::sync::{Arc, Mutex};

use super::staged::{StageProducer, Staged};
use super::{
    ClusterClosedSet, JumpEnum, NegClosedSet, NegClosedSetJump, PointEnum, PosClosedSet,
    SharpClosedSet, WordEnum,
};
use crate::spaces::{covers, uncovered_words, CantorPoint, PointToken, Token, Word};

/// Points with index below `stage / CLUSTER_EVIDENCE_DIVISOR` are ignored when
/// looking for evidence that a ball meets the cluster set.
pub const CLUSTER_EVIDENCE_DIVISOR: u64 = 2;

/// All prefixes, up to length `max_len`, of the given points.
fn prefix_set<'a>(points: impl Iterator<Item = &'a CantorPoint>, max_len: usize) -> HashSet<Word> {
    let mut set = HashSet::new();
    for p in points {
        for len in 0..=max_len {
            set.insert(p.prefix(len));
        }
    }
    set
}

fn column_word_len(columns: u64) -> usize {
    if columns == 0 {
        0
    } else {
        Word::from_number(columns - 1).len()
    }
}

/// Points read so far with their positions; each position is read once.
struct PointCache {
    source: Arc<dyn PointEnum>,
    read: Mutex<(u64, Vec<(u64, CantorPoint)>)>,
}

impl PointCache {
    fn new(source: Arc<dyn PointEnum>) -> Self {
        PointCache {
            source,
            read: Mutex::new((0, Vec::new())),
        }
    }

    /// Applies `f` to the points with position in `range`.
    fn with_points<R>(
        &self,
        range: std::ops::Range<u64>,
        f: impl FnOnce(&[(u64, CantorPoint)]) -> R,
    ) -> R {
        let mut guard = self.read.lock().expect("point cache lock");
        let (seen, points) = &mut *guard;
        while *seen < range.end {
            if let Some(p) = self.source.point(*seen).point() {
                points.push((*seen, p.clone()));
            }
            *seen += 1;
        }
        let from = points.partition_point(|(i, _)| *i < range.start);
        let to = points.partition_point(|(i, _)| *i < range.end);
        f(&points[from..to])
    }

    /// Column `c` at stage `s` removes word `c` when `c <= s` and no point in
    /// the evidence window enters it.
    fn entry(&self, column: u64, stage: u64, window_start: u64) -> Token {
        if column > stage {
            return Token::NoBall;
        }
        let w = Word::from_number(column);
        if self.with_points(window_start..stage, |ps| {
            ps.iter().any(|(_, p)| p.extends(&w))
        }) {
            Token::NoBall
        } else {
            Token::Word(w)
        }
    }

    fn snapshot(&self, stage: u64, columns: u64, window_start: u64) -> Vec<Token> {
        let seen = self.with_points(window_start..stage, |ps| {
            prefix_set(ps.iter().map(|(_, p)| p), column_word_len(columns))
        });
        (0..columns)
            .map(|c| {
                let w = Word::from_number(c);
                if c <= stage && !seen.contains(&w) {
                    Token::Word(w)
                } else {
                    Token::NoBall
                }
            })
            .collect()
    }
}

struct PosToNegJump(PointCache);

impl JumpEnum for PosToNegJump {
    fn entry(&self, column: u64, stage: u64) -> Token {
        self.0.entry(column, stage, 0)
    }

    fn snapshot(&self, stage: u64, columns: u64) -> Vec<Token> {
        self.0.snapshot(stage, columns, 0)
    }
}

/// Positive information to converging negative information: word `c` is
/// removed at stage `s` while none of the first `s` points enters it.
pub fn pos_to_negjump(set: &PosClosedSet) -> NegClosedSetJump {
    NegClosedSetJump::new(Arc::new(PosToNegJump(PointCache::new(set.inner()))))
}

struct ClusterToNegJump(PointCache);

impl JumpEnum for ClusterToNegJump {
    fn entry(&self, column: u64, stage: u64) -> Token {
        self.0
            .entry(column, stage, stage / CLUSTER_EVIDENCE_DIVISOR)
    }

    fn snapshot(&self, stage: u64, columns: u64) -> Vec<Token> {
        self.0
            .snapshot(stage, columns, stage / CLUSTER_EVIDENCE_DIVISOR)
    }
}

/// Cluster-point name to converging negative information: word `c` is
/// removed at stage `s` while no point with index in `[s/2, s)` enters it.
pub fn cluster_to_negjump(set: &ClusterClosedSet) -> NegClosedSetJump {
    NegClosedSetJump::new(Arc::new(ClusterToNegJump(PointCache::new(set.inner()))))
}

struct SharpToNegJump(Arc<dyn WordEnum>);

impl JumpEnum for SharpToNegJump {
    fn entry(&self, column: u64, stage: u64) -> Token {
        if column >= stage / 2 {
            return Token::NoBall;
        }
        let w = Word::from_number(column);
        let listed = (0..stage).any(|i| self.0.token(i).word() == Some(&w));
        if listed {
            Token::NoBall
        } else {
            Token::Word(w)
        }
    }

    fn snapshot(&self, stage: u64, columns: u64) -> Vec<Token> {
        let listed: HashSet<Word> = (0..stage)
            .filter_map(|i| self.0.token(i).word().cloned())
            .collect();
        (0..columns)
            .map(|c| {
                let w = Word::from_number(c);
                if c < stage / 2 && !listed.contains(&w) {
                    Token::Word(w)
                } else {
                    Token::NoBall
                }
            })
            .collect()
    }
}

/// Word `c < s/2` is removed at stage `s` while it has not been listed among
/// the first `s` tokens, so the limit removes exactly the unlisted words.
/// Columns from `s/2` on wait, since a listing may spend up to two tokens
/// per word number before it reaches them.
pub fn sharp_to_negjump(set: &SharpClosedSet) -> NegClosedSetJump {
    NegClosedSetJump::new(Arc::new(SharpToNegJump(set.0.clone())))
}

struct BoundaryNegJump(Arc<dyn WordEnum>);

impl BoundaryNegJump {
    fn decide(removed: &[Word], w: Word) -> Token {
        let exterior = covers(removed, &w);
        let interior = removed.iter().all(|u| !u.compatible(&w));
        if exterior || interior {
            Token::Word(w)
        } else {
            Token::NoBall
        }
    }

    fn removed(&self, stage: u64) -> Vec<Word> {
        (0..stage)
            .filter_map(|i| self.0.token(i).word().cloned())
            .collect()
    }
}

impl JumpEnum for BoundaryNegJump {
    fn entry(&self, column: u64, stage: u64) -> Token {
        if column > stage {
            return Token::NoBall;
        }
        Self::decide(&self.removed(stage), Word::from_number(column))
    }

    fn snapshot(&self, stage: u64, columns: u64) -> Vec<Token> {
        let removed = self.removed(stage);
        (0..columns)
            .map(|c| {
                if c > stage {
                    Token::NoBall
                } else {
                    Self::decide(&removed, Word::from_number(c))
                }
            })
            .collect()
    }
}

/// Converging negative information for the boundary: word `c` is removed at
/// stage `s` when the removals seen so far cover it (permanent) or none of
/// them meets it (revocable).
pub fn boundary_negjump(set: &NegClosedSet) -> NegClosedSetJump {
    NegClosedSetJump::new(Arc::new(BoundaryNegJump(set.0.clone())))
}

/// Leftmost point of `y·2^ℕ` outside the balls of `removed`; `y` must be uncovered.
fn leftmost_uncovered(removed: &[Word], y: &Word) -> CantorPoint {
    let mut x = y.clone();
    let mut relevant: Vec<Word> = removed
        .iter()
        .filter(|u| u.compatible(&x))
        .cloned()
        .collect();
    while !relevant.is_empty() {
        let zero = x.extended(0);
        x = if covers(&relevant, &zero) {
            x.extended(1)
        } else {
            zero
        };
        relevant.retain(|u| u.compatible(&x));
    }
    CantorPoint::padded(&x, 0)
}

fn level_depth(level: u64) -> usize {
    (63 - (level + 1).leading_zeros()) as usize
}

struct ClusterEmitter {
    source: NegClosedSetJump,
    stage: u64,
    previous: Vec<Token>,
}

impl StageProducer for ClusterEmitter {
    type Item = PointToken;

    fn run_stage(&mut self, out: &mut Vec<PointToken>) {
        let s = self.stage;
        let snap = self.source.snapshot(s, s + 1);
        let first_changed = snap
            .iter()
            .zip(&self.previous)
            .position(|(a, b)| a != b)
            .map_or(s, |c| c as u64);
        let start = out.len();
        for level in first_changed..=s {
            let words: Vec<Word> = snap[..=level as usize]
                .iter()
                .filter_map(|t| t.word().cloned())
                .collect();
            for y in uncovered_words(&words, level_depth(level)) {
                out.push(PointToken::Point(leftmost_uncovered(&words, &y)));
            }
        }
        out.push(PointToken::Inf);
        // Padding makes stage `s` end at index >= (s + 1)(s + 2) / 2 for every input.
        let padded = start + s as usize + 1;
        if out.len() < padded {
            out.resize(padded, PointToken::Inf);
        }
        self.previous = snap;
        self.stage += 1;
    }
}

struct StagedPoints(Staged<ClusterEmitter>);

impl PointEnum for StagedPoints {
    fn point(&self, index: u64) -> PointToken {
        self.0.get(index)
    }
}

/// Converging negative information to a cluster-point name. At stage `s`,
/// every level `k <= s` whose columns `0..=k` changed (or which is new)
/// emits the leftmost uncovered point of each uncovered cylinder of depth
/// `floor(log2(k + 1))`; `∞` closes each stage and pads it to `s + 1`
/// tokens, so index `n` is reached by stage `sqrt(2n)` whatever the input.
pub fn negjump_to_cluster(set: &NegClosedSetJump) -> ClusterClosedSet {
    let emitter = ClusterEmitter {
        source: set.clone(),
        stage: 0,
        previous: Vec::new(),
    };
    ClusterClosedSet::new(Arc::new(StagedPoints(Staged::new(emitter))))
}

/// The same point list read as positive information: the closure of the
/// listed points, a superset of the cluster set.
pub fn cluster_to_closure(set: &ClusterClosedSet) -> PosClosedSet {
    PosClosedSet::new(set.inner())
}

/// A nowhere dense superset of the boundary, named positively.
pub fn boundary_superset(set: &NegClosedSet) -> PosClosedSet {
    cluster_to_closure(&negjump_to_cluster(&boundary_negjump(set)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_sets::{PointStreamSpec, WordStreamSpec};
    use crate::spaces::w;

    #[test]
    fn pos_singleton_columns() {
        let a = PosClosedSet::from_spec(PointStreamSpec::constant(PointToken::Point(
            CantorPoint::padded(&w(""), 0),
        )));
        let j = pos_to_negjump(&a);
        let one = w("1").number();
        let zero = w("0").number();
        assert_eq!(j.entry(one, 50), Token::Word(w("1")));
        assert_eq!(j.entry(zero, 50), Token::NoBall);
        assert_eq!(
            j.snapshot(50, 20),
            (0..20).map(|c| j.entry(c, 50)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn leftmost_point() {
        let p = leftmost_uncovered(&[w("00"), w("010")], &w("0"));
        assert_eq!(p.prefix(5), w("01100"));
    }

    #[test]
    fn empty_negjump_gives_only_inf() {
        let empty = NegClosedSetJump::from_spec(crate::closed_sets::NegJumpSpec::new(vec![
            crate::names::FiniteGen::constant(Token::Word(w(""))),
        ]));
        let cl = negjump_to_cluster(&empty);
        let tail: Vec<PointToken> = (100..140).map(|i| cl.point(i)).collect();
        assert!(tail.iter().all(|t| *t == PointToken::Inf));
    }

    #[test]
    fn boundary_of_whole_space_is_empty() {
        let j = boundary_negjump(&NegClosedSet::whole_space());
        assert!(j.snapshot(30, 30).iter().all(|t| t.word().is_some()));
        let half =
            NegClosedSet::from_spec(WordStreamSpec::listed(vec![w("1").into()], Token::NoBall));
        let j = boundary_negjump(&half);
        let snap = j.snapshot(10, 7);
        assert_eq!(snap[w("0").number() as usize], Token::Word(w("0")));
        assert_eq!(snap[0], Token::NoBall);
    }
}
