use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite binary word, naming the basic open ball `w·2^ℕ`.
///
/// Words are ordered length-first, then lexicographically; [`Word::number`]
/// is the position in that order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if let Some((position, &value)) = bits.iter().enumerate().find(|(_, &b)| b > 1) {
            return Err(Error::NotABit {
                position,
                value: value as u64,
            });
        }
        Ok(Word(bits.to_vec()))
    }

    pub(crate) fn from_bits_unchecked(bits: Vec<u8>) -> Self {
        Word(bits)
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<u8> {
        self.0.get(i).copied()
    }

    pub fn push(&mut self, bit: u8) {
        debug_assert!(bit <= 1);
        self.0.push(bit);
    }

    pub fn extended(&self, bit: u8) -> Word {
        let mut w = self.clone();
        w.push(bit);
        w
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut bits = self.0.clone();
        bits.extend_from_slice(&other.0);
        Word(bits)
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len.min(self.0.len())].to_vec())
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// The balls `self·2^ℕ` and `other·2^ℕ` intersect.
    pub fn compatible(&self, other: &Word) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// Length of the longest common prefix.
    pub fn common_prefix_len(&self, other: &Word) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .take_while(|(a, b)| a == b)
            .count()
    }

    /// Position in the length-lexicographic enumeration (`ε` is 0).
    ///
    /// Panics for words longer than 62 bits.
    pub fn number(&self) -> u64 {
        assert!(self.0.len() <= 62, "word too long to number");
        let value = self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
        (1u64 << self.0.len()) - 1 + value
    }

    pub fn from_number(n: u64) -> Word {
        let len = 63 - (n + 1).leading_zeros() as usize;
        let value = n + 1 - (1u64 << len);
        Word((0..len).rev().map(|i| ((value >> i) & 1) as u8).collect())
    }

    /// The word read as a binary numeral, most significant bit first.
    ///
    /// Panics for words longer than 63 bits.
    pub fn binary_value(&self) -> u64 {
        assert!(self.0.len() <= 63, "word too long to read as a numeral");
        self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    /// The `len`-bit binary numeral of `value`; higher bits are dropped.
    pub fn from_binary_value(value: u64, len: usize) -> Word {
        Word(
            (0..len)
                .rev()
                .map(|i| if i < 64 { ((value >> i) & 1) as u8 } else { 0 })
                .collect(),
        )
    }

    /// All words of length `len` in lexicographic order.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = Word> {
        let start = (1u64 << len) - 1;
        (start..start + (1u64 << len)).map(Word::from_number)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            f.write_str(if *b == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::InvalidWord(s.to_string())),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for parsing a word literal; panics on invalid input.
pub fn w(s: &str) -> Word {
    s.parse().expect("valid word literal")
}

/// An entry of a removal enumeration: a word, or the reserved `NoBall` token.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Token {
    Word(Word),
    NoBall,
}

impl Token {
    pub fn word(&self) -> Option<&Word> {
        match self {
            Token::Word(w) => Some(w),
            Token::NoBall => None,
        }
    }

    /// Natural-number code: `0` for `NoBall`, `number + 1` for words.
    pub fn code(&self) -> u64 {
        match self {
            Token::NoBall => 0,
            Token::Word(w) => w.number() + 1,
        }
    }

    pub fn from_code(code: u64) -> Token {
        match code {
            0 => Token::NoBall,
            c => Token::Word(Word::from_number(c - 1)),
        }
    }
}

impl From<Word> for Token {
    fn from(w: Word) -> Self {
        Token::Word(w)
    }
}

impl Serialize for Token {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Token::NoBall => s.serialize_str("-"),
            Token::Word(w) => w.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Token {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "-" {
            Ok(Token::NoBall)
        } else {
            s.parse().map(Token::Word).map_err(serde::de::Error::custom)
        }
    }
}

/// True when `x·2^ℕ` is contained in the union of the balls of `words`.
pub fn covers(words: &[Word], x: &Word) -> bool {
    let relevant: Vec<&Word> = words.iter().filter(|w| w.compatible(x)).collect();
    covers_rec(&relevant, x)
}

fn covers_rec(relevant: &[&Word], x: &Word) -> bool {
    if relevant.is_empty() {
        return false;
    }
    if relevant.iter().any(|w| w.is_prefix_of(x)) {
        return true;
    }
    [0u8, 1].iter().all(|&b| {
        let child = x.extended(b);
        let sub: Vec<&Word> = relevant
            .iter()
            .copied()
            .filter(|w| w.compatible(&child))
            .collect();
        covers_rec(&sub, &child)
    })
}

/// Depth-`depth` words whose ball is not covered by `removed`.
pub fn uncovered_words(removed: &[Word], depth: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let all: Vec<&Word> = removed.iter().collect();
    collect_uncovered(&all, Word::empty(), depth, &mut out);
    out
}

fn collect_uncovered(relevant: &[&Word], x: Word, depth: usize, out: &mut Vec<Word>) {
    if relevant.iter().any(|w| w.is_prefix_of(&x)) {
        return;
    }
    if x.len() == depth {
        if !covers_rec(relevant, &x) {
            out.push(x);
        }
        return;
    }
    for b in [0u8, 1] {
        let child = x.extended(b);
        let sub: Vec<&Word> = relevant
            .iter()
            .copied()
            .filter(|w| w.compatible(&child))
            .collect();
        collect_uncovered(&sub, child, depth, out);
    }
}
