//! Brute-force oracles computed from instance data alone. They enumerate
//! words directly and share no search code with the solvers they check.
#![allow(dead_code)]

use std::collections::BTreeSet;

use baire::closed_sets::{OutsideSpec, PointStreamSpec, PointTail, WordStreamSpec, WordTail};
use baire::spaces::{CantorPoint, PointToken, Word};

/// Every word of length `len` whose first bits are `prefix`.
pub fn extensions(prefix: &Word, len: usize) -> Vec<Word> {
    assert!(len >= prefix.len());
    let extra = len - prefix.len();
    (0..1u64 << extra)
        .map(|x| {
            let mut w = prefix.clone();
            for b in (0..extra).rev() {
                w.push(((x >> b) & 1) as u8);
            }
            w
        })
        .collect()
}

/// `x·2^ℕ ⊆ ∪ words·2^ℕ`, decided on the extensions of `x` at the length of
/// the longest word.
pub fn ball_covered(words: &[Word], x: &Word) -> bool {
    let len = words.iter().map(Word::len).max().unwrap_or(0).max(x.len());
    extensions(x, len)
        .iter()
        .all(|y| words.iter().any(|w| w.is_prefix_of(y)))
}

/// Depth-`depth` words whose ball is not covered by `removed`.
pub fn complement_truncation(removed: &[Word], depth: usize) -> BTreeSet<Word> {
    extensions(&Word::empty(), depth)
        .into_iter()
        .filter(|x| !ball_covered(removed, x))
        .collect()
}

/// Depth-`depth` prefixes of finitely many points.
pub fn point_truncation(points: &[CantorPoint], depth: usize) -> BTreeSet<Word> {
    points.iter().map(|p| p.prefix(depth)).collect()
}

/// Depth-`depth` words meeting the union of the given balls.
pub fn ball_union_truncation(balls: &[Word], depth: usize) -> BTreeSet<Word> {
    extensions(&Word::empty(), depth)
        .into_iter()
        .filter(|x| balls.iter().any(|b| b.compatible(x)))
        .collect()
}

/// Points listed in the head of a positive name and the balls of a dense tail.
pub fn positive_parts(spec: &PointStreamSpec) -> (Vec<CantorPoint>, Vec<Word>) {
    let points = spec
        .head()
        .iter()
        .filter_map(|t| t.point().cloned())
        .collect();
    let balls = match spec.tail() {
        PointTail::Dense { balls } => balls.clone(),
        PointTail::Constant(PointToken::Inf) => Vec::new(),
        other => panic!("oracle does not handle tail {other:?}"),
    };
    (points, balls)
}

/// Closure of a positive name at depth `depth`.
pub fn positive_truncation(spec: &PointStreamSpec, depth: usize) -> BTreeSet<Word> {
    let (points, balls) = positive_parts(spec);
    let mut out = point_truncation(&points, depth);
    out.extend(ball_union_truncation(&balls, depth));
    out
}

/// Position of the first listed point extending `u`, scanning `0..limit`.
pub fn first_entry(spec: &PointStreamSpec, u: &Word, limit: u64) -> Option<u64> {
    (0..limit).find(|&t| spec.at(t).point().is_some_and(|p| p.extends(u)))
}

/// The finite data of an `outside` removal name.
pub fn outside_parts(spec: &WordStreamSpec) -> &OutsideSpec {
    match spec.tail() {
        WordTail::Outside(o) => o,
        other => panic!("oracle does not handle tail {other:?}"),
    }
}

/// A point lies in the set named by an `outside` name iff it extends a
/// listed ball or equals a listed point; decided on depth-`depth` prefixes
/// for balls and exactly for eventually periodic points.
pub fn outside_contains(o: &OutsideSpec, q: &CantorPoint) -> bool {
    o.balls.iter().any(|b| q.extends(b)) || o.points.iter().any(|p| p.same_point(q))
}

/// `w·2^ℕ` lies inside the union of the listed balls.
pub fn inside_balls(balls: &[Word], w: &Word) -> bool {
    ball_covered(balls, w)
}

/// Length of the shortest word whose extensions outnumber `n` points.
pub fn escape_bits(n: usize) -> u32 {
    usize::BITS - n.leading_zeros()
}

/// Integer `⌊log2 n⌋` for `n >= 1`.
pub fn floor_log2(n: u64) -> u32 {
    63 - n.max(1).leading_zeros()
}
