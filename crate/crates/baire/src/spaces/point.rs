use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::word::Word;
use crate::error::{Error, Result};
use crate::names::FiniteGen;

/// An eventually periodic point of Cantor space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct CantorPoint(FiniteGen<u8>);

impl CantorPoint {
    pub fn new(bits: FiniteGen<u8>) -> Result<Self> {
        let check = |values: &[u8]| {
            values
                .iter()
                .enumerate()
                .find(|(_, &b)| b > 1)
                .map(|(position, &b)| Error::NotABit {
                    position,
                    value: b as u64,
                })
        };
        if let Some(e) = check(bits.head()) {
            return Err(e);
        }
        if let Some(e) = check(&bits.tail_values()) {
            return Err(e);
        }
        Ok(CantorPoint(bits))
    }

    /// `prefix` followed by `pad` forever.
    pub fn padded(prefix: &Word, pad: u8) -> Self {
        assert!(pad <= 1);
        CantorPoint(FiniteGen::padded(prefix.bits().to_vec(), pad))
    }

    /// `prefix` followed by `cycle` repeated forever.
    pub fn periodic(prefix: &Word, cycle: &Word) -> Self {
        assert!(!cycle.is_empty(), "cycle must be non-empty");
        CantorPoint(
            FiniteGen::cycle(prefix.bits().to_vec(), cycle.bits().to_vec())
                .expect("non-empty cycle"),
        )
    }

    pub fn bits(&self) -> &FiniteGen<u8> {
        &self.0
    }

    pub fn bit(&self, n: u64) -> u8 {
        *self.0.at(n)
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word::from_bits_unchecked(self.0.prefix(len))
    }

    /// The point lies in the ball `w·2^ℕ`.
    pub fn extends(&self, w: &Word) -> bool {
        w.bits()
            .iter()
            .enumerate()
            .all(|(i, &b)| self.bit(i as u64) == b)
    }

    /// Number of leading bits after which the point is a pure repetition of
    /// its tail.
    pub fn settled_len(&self) -> usize {
        self.0.settled_len()
    }

    /// True when the two points are equal as infinite sequences.
    pub fn same_point(&self, other: &CantorPoint) -> bool {
        let horizon =
            self.settled_len().max(other.settled_len()) + self.0.period() * other.0.period();
        (0..horizon as u64).all(|i| self.bit(i) == other.bit(i))
    }
}

impl<'de> Deserialize<'de> for CantorPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let gen = FiniteGen::<u8>::deserialize(d)?;
        CantorPoint::new(gen).map_err(serde::de::Error::custom)
    }
}

/// Entry of a point list: a point, or the sentinel `∞` carrying no information.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PointToken {
    Point(CantorPoint),
    Inf,
}

impl PointToken {
    pub fn point(&self) -> Option<&CantorPoint> {
        match self {
            PointToken::Point(p) => Some(p),
            PointToken::Inf => None,
        }
    }
}

impl Serialize for PointToken {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PointToken::Inf => s.serialize_str("inf"),
            PointToken::Point(p) => p.serialize(s),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawPointToken {
    Sentinel(String),
    Point(CantorPoint),
}

impl<'de> Deserialize<'de> for PointToken {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match RawPointToken::deserialize(d)? {
            RawPointToken::Sentinel(s) if s == "inf" => Ok(PointToken::Inf),
            RawPointToken::Sentinel(s) => Err(serde::de::Error::custom(format!(
                "unknown point token {s:?}"
            ))),
            RawPointToken::Point(p) => Ok(PointToken::Point(p)),
        }
    }
}

/// A word over the naturals, naming the Baire ball `v·ℕ^ℕ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BaireWord(pub Vec<u64>);

impl BaireWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_prefix_of(&self, other: &BaireWord) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn compatible(&self, other: &BaireWord) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// The `n`-th word over `{0..=bound}` in length-lexicographic order.
    pub fn from_number(mut n: u64, bound: u64) -> BaireWord {
        let base = bound + 1;
        let mut len = 0u32;
        let mut block = 1u64;
        while n >= block {
            n -= block;
            len += 1;
            block = block.saturating_mul(base);
        }
        let mut digits = vec![0u64; len as usize];
        for d in digits.iter_mut().rev() {
            *d = n % base;
            n /= base;
        }
        BaireWord(digits)
    }

    /// Inverse of [`BaireWord::from_number`]; `None` if a symbol exceeds `bound`.
    pub fn number(&self, bound: u64) -> Option<u64> {
        let base = bound + 1;
        if self.0.iter().any(|&d| d > bound) {
            return None;
        }
        let mut offset = 0u64;
        let mut block = 1u64;
        for _ in 0..self.0.len() {
            offset = offset.checked_add(block)?;
            block = block.checked_mul(base)?;
        }
        let value = self
            .0
            .iter()
            .try_fold(0u64, |acc, &d| acc.checked_mul(base)?.checked_add(d))?;
        offset.checked_add(value)
    }
}

/// Eventually periodic point of Baire space.
pub type BairePoint = FiniteGen<u64>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::word::w;

    #[test]
    fn point_prefix_and_membership() {
        let p = CantorPoint::periodic(&w("1"), &w("01"));
        assert_eq!(p.prefix(6), w("101010"));
        assert!(p.extends(&w("1010")));
        assert!(!p.extends(&w("11")));
        assert!(CantorPoint::new(FiniteGen::padded(vec![0, 2], 0)).is_err());
    }

    #[test]
    fn same_point_across_encodings() {
        let a = CantorPoint::periodic(&Word::empty(), &w("01"));
        let b = CantorPoint::periodic(&w("0"), &w("10"));
        assert!(a.same_point(&b));
        assert!(!a.same_point(&CantorPoint::padded(&w("01"), 0)));
    }

    #[test]
    fn point_token_json() {
        let t: PointToken = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(t, PointToken::Inf);
        let p: PointToken = serde_json::from_str(r#"{"head":[1],"tail":{"constant":0}}"#).unwrap();
        assert_eq!(p.point().unwrap().prefix(3), w("100"));
        assert!(serde_json::from_str::<PointToken>("\"nope\"").is_err());
    }

    #[test]
    fn baire_numbering() {
        for bound in [0u64, 1, 2, 4] {
            for n in 0..400 {
                let v = BaireWord::from_number(n, bound);
                assert_eq!(v.number(bound), Some(n));
            }
        }
        assert_eq!(BaireWord::from_number(0, 2), BaireWord(vec![]));
        assert_eq!(BaireWord::from_number(3, 2), BaireWord(vec![2]));
        assert_eq!(BaireWord::from_number(4, 2), BaireWord(vec![0, 0]));
    }
}
