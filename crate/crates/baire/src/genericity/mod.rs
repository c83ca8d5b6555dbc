//! The probabilistic construction of 1-generic points, the trees of
//! successful advice, exhaustive advice censuses and the jump operator's
//! finite approximation.

mod census;
mod fireworks;

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use census::{
    advice_census, advice_sample, AdviceOutcome, AdviceStatus, CensusReport, ColumnMarginal,
    SampleReport,
};
pub use fireworks::{
    fireworks_1gen, fireworks_tree, tree_depth, tree_path_status, FireworksEvent, FireworksRun,
    Inconclusive, PathStatus, RequirementState, SatisfiedBy, ShortenedPath, TreeApprox,
};

use crate::closed_sets::{boundary_negjump, NegClosedSet, NegClosedSetJump, WordEnum};
use crate::error::{Error, Result};
use crate::names::{FiniteGen, Outcome};
use crate::solvers::{jump_diagonalize, JumpRun};
use crate::spaces::{Token, Word};

/// Entry of a column enumerating a c.e. open set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ColumnToken {
    Word(Word),
    /// Nothing enumerated at this position.
    Pause,
}

impl ColumnToken {
    pub fn word(&self) -> Option<&Word> {
        match self {
            ColumnToken::Word(w) => Some(w),
            ColumnToken::Pause => None,
        }
    }
}

impl Serialize for ColumnToken {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ColumnToken::Word(w) => w.serialize(s),
            ColumnToken::Pause => s.serialize_str("pause"),
        }
    }
}

impl<'de> Deserialize<'de> for ColumnToken {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "pause" {
            return Ok(ColumnToken::Pause);
        }
        s.parse::<Word>()
            .map(ColumnToken::Word)
            .map_err(serde::de::Error::custom)
    }
}

/// Finitely generated columns `w_{i0}, w_{i1}, …`; column `i` enumerates
/// `U_i = ∪_j w_{ij}·2^ℕ`. Columns past the list are all `Pause`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct CeOpenFamily {
    pub columns: Vec<FiniteGen<ColumnToken>>,
}

impl CeOpenFamily {
    pub fn new(columns: Vec<FiniteGen<ColumnToken>>) -> Self {
        CeOpenFamily { columns }
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn entry(&self, column: u64, j: u64) -> ColumnToken {
        self.columns
            .get(column as usize)
            .map_or(ColumnToken::Pause, |c| c.at(j).clone())
    }

    /// Every word column `i` ever enumerates.
    pub fn words(&self, column: u64) -> BTreeSet<Word> {
        let Some(col) = self.columns.get(column as usize) else {
            return BTreeSet::new();
        };
        col.head()
            .iter()
            .chain(col.tail_values().iter())
            .filter_map(|t| t.word().cloned())
            .collect()
    }

    /// `2^ℕ \ U_i` named by removing the enumerated balls.
    pub fn complement(&self, column: u64) -> NegClosedSet {
        let col = self
            .columns
            .get(column as usize)
            .cloned()
            .unwrap_or_else(|| FiniteGen::constant(ColumnToken::Pause));
        NegClosedSet::new(Arc::new(ColumnRemovals(col)))
    }
}

struct ColumnRemovals(FiniteGen<ColumnToken>);

impl WordEnum for ColumnRemovals {
    fn token(&self, index: u64) -> Token {
        self.0
            .at(index)
            .word()
            .cloned()
            .map_or(Token::NoBall, Token::Word)
    }
}

/// Advice blocks `n_0, n_1, …` with `n_i ∈ {1, …, 2^{k+i+1}}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Advice {
    pub k: u32,
    pub blocks: Vec<u64>,
}

impl Advice {
    pub fn new(k: u32, blocks: Vec<u64>) -> Result<Self> {
        for (i, &n) in blocks.iter().enumerate() {
            let top = Self::block_range(k, i);
            if n == 0 || n > top {
                return Err(Error::InvalidInstance(format!(
                    "advice block {i} is {n}, outside 1..={top}"
                )));
            }
        }
        Ok(Advice { k, blocks })
    }

    /// Number of values block `i` can take.
    pub fn block_range(k: u32, i: usize) -> u64 {
        1u64 << (k as usize + i + 1)
    }

    /// Bit length `k + i + 1` of block `i`.
    pub fn block_len(k: u32, i: usize) -> usize {
        k as usize + i + 1
    }

    /// Reads `count` blocks from a bit string: block `i` is a
    /// `(k + i + 1)`-bit binary numeral `b`, standing for `b + 1`.
    pub fn from_bits(k: u32, bits: &Word, count: usize) -> Result<Self> {
        let mut blocks = Vec::with_capacity(count);
        let mut at = 0;
        for i in 0..count {
            let len = Self::block_len(k, i);
            if at + len > bits.len() {
                return Err(Error::InvalidInstance(format!(
                    "advice needs {} bits",
                    at + len
                )));
            }
            let value = bits.bits()[at..at + len]
                .iter()
                .fold(0u64, |acc, &b| (acc << 1) | b as u64);
            blocks.push(value + 1);
            at += len;
        }
        Advice::new(k, blocks)
    }

    pub fn to_bits(&self) -> Word {
        let mut out = Word::empty();
        for (i, &n) in self.blocks.iter().enumerate() {
            let len = Self::block_len(self.k, i);
            for b in (0..len).rev() {
                out.push((((n - 1) >> b) & 1) as u8);
            }
        }
        out
    }

    pub fn block(&self, i: usize) -> Option<u64> {
        self.blocks.get(i).copied()
    }
}

/// The jump at `i` on a finite prefix: `1` when some `w_{ij}` with `j < fuel`
/// is a prefix of `p_prefix`. Non-membership is never certified at finite fuel.
pub fn jump_eval(i: u64, p_prefix: &Word, fam: &CeOpenFamily, fuel: u64) -> Outcome<u8> {
    let hit = (0..fuel).any(|j| {
        fam.entry(i, j)
            .word()
            .is_some_and(|w| w.is_prefix_of(p_prefix))
    });
    if hit {
        Outcome::Value(1)
    } else {
        Outcome::Inconclusive
    }
}

/// The diagonalizer against converging negative information for each
/// boundary `∂U_i`; on finitely generated families the prefix stream settles
/// on a point that enters or stays away from every `U_i`.
pub fn one_gen_limit_solve(fam: &CeOpenFamily, stages: u64) -> JumpRun {
    let sets: Vec<NegClosedSetJump> = (0..fam.len() as u64)
        .map(|i| boundary_negjump(&fam.complement(i)))
        .collect();
    jump_diagonalize(&sets, stages)
}

/// True when `p` meets `U_i` through some enumerated word or has a prefix
/// whose ball misses every enumerated word, for every column.
pub fn decides_every_column(fam: &CeOpenFamily, p: &crate::spaces::CantorPoint) -> bool {
    (0..fam.len() as u64).all(|i| {
        let words = fam.words(i);
        let longest = words.iter().map(Word::len).max().unwrap_or(0);
        let prefix = p.prefix(longest);
        words.iter().any(|w| w.is_prefix_of(&prefix))
            || words.iter().all(|w| !w.compatible(&prefix))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::names::Tail;
    use crate::spaces::{w, CantorPoint};

    #[test]
    fn advice_bits_round_trip() {
        let a = Advice::new(2, vec![1, 8, 16]).unwrap();
        assert_eq!(a.to_bits().len(), 3 + 4 + 5);
        assert_eq!(Advice::from_bits(2, &a.to_bits(), 3).unwrap(), a);
        assert!(Advice::new(1, vec![5]).is_err());
        assert!(Advice::new(1, vec![0]).is_err());
    }

    #[test]
    fn jump_examples() {
        let eps = CeOpenFamily::new(vec![FiniteGen::constant(ColumnToken::Word(Word::empty()))]);
        assert_eq!(jump_eval(0, &w("0110"), &eps, 1), Outcome::Value(1));
        assert_eq!(jump_eval(1, &w("0110"), &eps, 100), Outcome::Inconclusive);
        let mut head = vec![ColumnToken::Pause; 7];
        head.push(ColumnToken::Word(w("01")));
        let late = CeOpenFamily::new(vec![FiniteGen::new(
            head,
            Tail::Constant(ColumnToken::Pause),
        )
        .unwrap()]);
        assert_eq!(jump_eval(0, &w("011"), &late, 7), Outcome::Inconclusive);
        assert_eq!(jump_eval(0, &w("011"), &late, 8), Outcome::Value(1));
    }

    #[test]
    fn limit_solver_decides_single_word() {
        let fam = CeOpenFamily::new(vec![FiniteGen::constant(ColumnToken::Word(w("10")))]);
        let run = one_gen_limit_solve(&fam, 60);
        let p = CantorPoint::padded(&run.final_prefix(), 0);
        assert!(decides_every_column(&fam, &p));
        assert!(run.prefixes.settled_from().unwrap() < 30);
    }

    #[test]
    fn token_serde() {
        let t: Vec<ColumnToken> = serde_json::from_str(r#"["01","pause",""]"#).unwrap();
        assert_eq!(
            t,
            vec![
                ColumnToken::Word(w("01")),
                ColumnToken::Pause,
                ColumnToken::Word(Word::empty())
            ]
        );
    }
}
