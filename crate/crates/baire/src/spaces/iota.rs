//! The embedding `ι(p) = 1^{p(0)} 0 1^{p(1)} 0 …` of Baire space into Cantor
//! space, the nowhere dense sets covering its complement, and the image map
//! on negative information.

use std::sync::Arc;

use super::baire::{BaireNegClosedSet, BaireToken};
use super::point::{BairePoint, BaireWord, CantorPoint};
use super::word::{Token, Word};
use crate::closed_sets::{NegClosedSet, WordEnum};
use crate::error::{Error, Result};
use crate::names::{FiniteGen, Outcome, Tail};

/// Largest symbol accepted by [`iota_embed`]; blocks are materialized.
pub const MAX_EMBED_SYMBOL: u64 = 1 << 16;

/// `J(a_0 … a_n) = 1^{a_0} 0 … 1^{a_n} 0`.
pub fn iota_word(u: &BaireWord) -> Word {
    let mut bits = Vec::new();
    for &a in &u.0 {
        bits.extend(std::iter::repeat_n(1u8, a as usize));
        bits.push(0);
    }
    Word::from_bits_unchecked(bits)
}

fn blocks(symbols: &[u64]) -> Result<Vec<u8>> {
    let mut bits = Vec::new();
    for &a in symbols {
        if a > MAX_EMBED_SYMBOL {
            return Err(Error::InvalidInstance(format!(
                "symbol {a} exceeds the embedding limit {MAX_EMBED_SYMBOL}"
            )));
        }
        bits.extend(std::iter::repeat_n(1u8, a as usize));
        bits.push(0);
    }
    Ok(bits)
}

/// Exact image of an eventually periodic Baire point.
pub fn iota_embed(p: &BairePoint) -> Result<CantorPoint> {
    let head = blocks(p.head())?;
    let cycle = match p.tail() {
        Tail::RepeatLast => blocks(&p.head()[p.head().len() - 1..])?,
        Tail::Constant(c) => blocks(&[*c])?,
        Tail::Cycle(c) => blocks(c)?,
    };
    CantorPoint::new(FiniteGen::cycle(head, cycle)?)
}

/// First `len` symbols of `ι⁻¹(q)`; `Inconclusive` when `q` runs out of
/// zeros, which is how points outside the range show themselves.
pub fn iota_inverse(q: &CantorPoint, len: usize) -> Outcome<Vec<u64>> {
    let tail_has_zero = q.bits().tail_values().contains(&0);
    let settled = q.settled_len() as u64;
    let mut out = Vec::with_capacity(len);
    let mut run = 0u64;
    let mut i = 0u64;
    while out.len() < len {
        if !tail_has_zero && i >= settled {
            return Outcome::Inconclusive;
        }
        if q.bit(i) == 0 {
            out.push(run);
            run = 0;
        } else {
            run += 1;
        }
        i += 1;
    }
    Outcome::Value(out)
}

/// Parses complete blocks of `bits` starting with `carry` pending ones.
fn parse_blocks(bits: &[u8], mut carry: u64) -> (Vec<u64>, u64) {
    let mut out = Vec::new();
    for &b in bits {
        if b == 0 {
            out.push(carry);
            carry = 0;
        } else {
            carry += 1;
        }
    }
    (out, carry)
}

/// Exact eventually periodic preimage, or `Inconclusive` when the tail of
/// `q` has no zero.
pub fn iota_inverse_exact(q: &CantorPoint) -> Outcome<BairePoint> {
    let gen = q.bits();
    let cycle: Vec<u8> = match gen.tail() {
        Tail::RepeatLast => vec![*gen.head().last().expect("validated")],
        Tail::Constant(c) => vec![*c],
        Tail::Cycle(c) => c.clone(),
    };
    if !cycle.contains(&0) {
        return Outcome::Inconclusive;
    }
    let first: Vec<u8> = gen.head().iter().chain(&cycle).copied().collect();
    let (head, carry) = parse_blocks(&first, 0);
    let (tail, end_carry) = parse_blocks(&cycle, carry);
    debug_assert_eq!(carry, end_carry);
    Outcome::Value(FiniteGen::cycle(head, tail).expect("cycle with a zero yields a symbol"))
}

struct CoverSet {
    from: usize,
}

impl CoverSet {
    fn removes(&self, w: &Word) -> bool {
        w.bits().iter().skip(self.from).any(|&b| b == 0)
    }
}

impl WordEnum for CoverSet {
    fn token(&self, index: u64) -> Token {
        let w = Word::from_number(index);
        if self.removes(&w) {
            Token::Word(w)
        } else {
            Token::NoBall
        }
    }

    fn first_compatible(&self, v: &Word, limit: u64) -> Option<(u64, Word)> {
        let u = match v
            .bits()
            .iter()
            .enumerate()
            .skip(self.from)
            .find(|(_, &b)| b == 0)
        {
            Some((pos, _)) => v.prefix(pos + 1),
            None if v.len() >= self.from => v.extended(0),
            None => {
                let mut u = v.clone();
                while u.len() <= self.from {
                    u.push(0);
                }
                u
            }
        };
        let pos = u.number();
        (pos < limit).then_some((pos, u))
    }
}

/// `C_i = {q : q(k) = 1 for all k >= i}`, named by removing every word with a
/// zero at some position `>= i`. Each `C_i` is nowhere dense and their union
/// is the complement of the range of `ι`.
pub fn iota_cover_set(i: u64) -> NegClosedSet {
    NegClosedSet::new(Arc::new(CoverSet { from: i as usize }))
}

struct ImageSet {
    source: BaireNegClosedSet,
}

impl WordEnum for ImageSet {
    fn token(&self, index: u64) -> Token {
        let t = index / 2;
        if index.is_multiple_of(2) {
            match self.source.token(t) {
                BaireToken::Word(u) => Token::Word(iota_word(&u)),
                BaireToken::NoBall => Token::NoBall,
            }
        } else {
            let bound = self.source.bound();
            let u = BaireWord::from_number(t, bound);
            let mut w = iota_word(&u);
            for _ in 0..=bound {
                w.push(1);
            }
            Token::Word(w)
        }
    }
}

/// Image of a closed subset of `{0..=bound}^ℕ` under `ι`: even tokens carry
/// `J(u)` for each removed `u`, odd tokens remove every block longer than
/// the bound. The result meets the range of `ι` exactly in `ι(A)`.
pub fn iota_image_set(set: &BaireNegClosedSet) -> NegClosedSet {
    NegClosedSet::new(Arc::new(ImageSet {
        source: set.clone(),
    }))
}
