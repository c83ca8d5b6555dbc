//! Seeded generators. Every random choice in the crate flows through
//! [`seeded_rng`], so equal seeds give byte-identical results.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::closed_sets::{NegJumpSpec, PointStreamSpec, PointTail, WordStreamSpec};
use crate::genericity::{CeOpenFamily, ColumnToken};
use crate::names::{FiniteGen, Tail};
use crate::spaces::{BaireStreamSpec, BaireToken, BaireWord, CantorPoint, PointToken, Token, Word};

pub type Rng64 = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly random word of length `len`.
pub fn random_word(rng: &mut Rng64, len: usize) -> Word {
    let mut w = Word::empty();
    for _ in 0..len {
        w.push(rng.random_range(0..2));
    }
    w
}

/// A random eventually periodic point with prefix and cycle lengths in `1..=4`.
pub fn random_point(rng: &mut Rng64) -> CantorPoint {
    let head_len = rng.random_range(0..=4);
    let head = random_word(rng, head_len);
    let cycle_len = rng.random_range(1..=3);
    let cycle = random_word(rng, cycle_len);
    CantorPoint::periodic(&head, &cycle)
}

fn padding(rng: &mut Rng64, max: usize) -> Vec<Token> {
    vec![Token::NoBall; rng.random_range(0..=max)]
}

/// A nowhere dense set: up to `max_points` points, named by removing every
/// ball that misses them, after a few idle tokens.
pub fn random_nowhere_dense(rng: &mut Rng64, max_points: usize) -> WordStreamSpec {
    let points = (0..rng.random_range(0..=max_points))
        .map(|_| random_point(rng))
        .collect();
    WordStreamSpec::outside(padding(rng, 3), points, vec![])
}

/// A cover of `2^ℕ` by `sets` sets: every word of length `depth` lies in
/// the ball list of one set, and some sets also carry isolated points.
pub fn random_cover(rng: &mut Rng64, sets: usize, depth: usize) -> Vec<WordStreamSpec> {
    let mut balls: Vec<Vec<Word>> = vec![Vec::new(); sets];
    for w in Word::all_of_length(depth) {
        let owner = rng.random_range(0..sets);
        balls[owner].push(w);
    }
    balls
        .into_iter()
        .map(|b| {
            let points = (0..rng.random_range(0..=2))
                .map(|_| random_point(rng))
                .collect();
            WordStreamSpec::outside(padding(rng, 3), points, b)
        })
        .collect()
}

/// A nowhere dense set given positively: finitely many points, then `∞`.
pub fn random_pos_nowhere_dense(rng: &mut Rng64, max_points: usize) -> PointStreamSpec {
    let points: Vec<CantorPoint> = (0..rng.random_range(0..=max_points))
        .map(|_| random_point(rng))
        .collect();
    if points.is_empty() {
        return PointStreamSpec::constant(PointToken::Inf);
    }
    let mut head: Vec<PointToken> = vec![PointToken::Inf; rng.random_range(0..=2)];
    head.extend(points.into_iter().map(PointToken::Point));
    PointStreamSpec::new(head, PointTail::Constant(PointToken::Inf)).expect("constant tail")
}

/// A positively given cover: the balls of length `depth` are split among
/// dense lists, plus lists of isolated points.
pub fn random_pos_cover(rng: &mut Rng64, sets: usize, depth: usize) -> Vec<PointStreamSpec> {
    let mut balls: Vec<Vec<Word>> = vec![Vec::new(); sets];
    for w in Word::all_of_length(depth) {
        let owner = rng.random_range(0..sets);
        balls[owner].push(w);
    }
    balls
        .into_iter()
        .map(|b| {
            if b.is_empty() {
                random_pos_nowhere_dense(rng, 2)
            } else {
                PointStreamSpec::dense(b).with_head(vec![PointToken::Inf; rng.random_range(0..=2)])
            }
        })
        .collect()
}

/// A random eventually constant column over words of length `<= max_len`.
fn random_column(rng: &mut Rng64, max_len: usize, settle: usize) -> FiniteGen<Token> {
    let token = |rng: &mut Rng64| {
        if rng.random_bool(0.25) {
            Token::NoBall
        } else {
            let len = rng.random_range(0..=max_len);
            Token::Word(random_word(rng, len))
        }
    };
    let head: Vec<Token> = (0..rng.random_range(0..=settle))
        .map(|_| token(rng))
        .collect();
    let last = token(rng);
    FiniteGen::new(head, Tail::Constant(last)).expect("constant tail")
}

/// Eventually constant double list: up to `max_columns` columns, each
/// constant from stage `max_settle` on.
pub fn random_negjump(
    rng: &mut Rng64,
    max_columns: usize,
    max_settle: usize,
    max_len: usize,
) -> NegJumpSpec {
    let n = rng.random_range(0..=max_columns);
    NegJumpSpec::new(
        (0..n)
            .map(|_| random_column(rng, max_len, max_settle))
            .collect(),
    )
}

/// Columns over words of length `<= max_len` with pauses and short cycles.
pub fn random_family(rng: &mut Rng64, columns: usize, max_len: usize) -> CeOpenFamily {
    let token = |rng: &mut Rng64| {
        if rng.random_bool(0.2) {
            ColumnToken::Pause
        } else {
            let len = rng.random_range(0..=max_len);
            ColumnToken::Word(random_word(rng, len))
        }
    };
    CeOpenFamily::new(
        (0..columns)
            .map(|_| {
                let head = (0..rng.random_range(0..=4)).map(|_| token(rng)).collect();
                let cycle = (0..rng.random_range(1..=3)).map(|_| token(rng)).collect();
                FiniteGen::cycle(head, cycle).expect("non-empty cycle")
            })
            .collect(),
    )
}

/// A closed subset of `{0..=bound}^ℕ` missing everything but a few points.
pub fn random_baire_set(rng: &mut Rng64, bound: u64, max_points: usize) -> BaireStreamSpec {
    let points = (0..rng.random_range(1..=max_points))
        .map(|_| {
            let head: Vec<u64> = (0..rng.random_range(0..=3))
                .map(|_| rng.random_range(0..=bound))
                .collect();
            let cycle: Vec<u64> = (0..rng.random_range(1..=2))
                .map(|_| rng.random_range(0..=bound))
                .collect();
            FiniteGen::cycle(head, cycle).expect("non-empty cycle")
        })
        .collect();
    let head = vec![BaireToken::NoBall; rng.random_range(0..=2)];
    BaireStreamSpec::outside(bound, head, points).expect("symbols within bound")
}

/// A random Baire word over `{0..=bound}`.
pub fn random_baire_word(rng: &mut Rng64, bound: u64, len: usize) -> BaireWord {
    BaireWord((0..len).map(|_| rng.random_range(0..=bound)).collect())
}

/// Picks an element uniformly.
pub fn choose<'a, T>(rng: &mut Rng64, items: &'a [T]) -> Option<&'a T> {
    items.choose(rng)
}
