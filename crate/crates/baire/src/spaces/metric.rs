//! Computable metric spaces with exact rational distances, the Cauchy
//! normalizer, the total representation it induces, preimages of negative
//! information and dense sequences in closed balls.

use std::collections::HashSet;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::baire::{BaireNegClosedSet, BaireToken, BaireWordEnum};
use super::point::{BairePoint, BaireWord};
use crate::error::{Error, Result};
use crate::names::{cantor_unpair, FiniteGen};

/// Index set `ℕ` with an exact distance oracle `d(α(n), α(m))`.
pub trait RationalMetricSpace: Send + Sync {
    fn dist(&self, n: u64, m: u64) -> BigRational;
    fn label(&self) -> &str;
}

/// `2^{-k}` as an exact rational; negative `k` gives `2^{|k|}`.
pub fn two_pow_neg(k: i64) -> BigRational {
    let p = BigInt::one() << k.unsigned_abs();
    if k >= 0 {
        BigRational::new(BigInt::one(), p)
    } else {
        BigRational::from_integer(p)
    }
}

/// Parses `"num/den"` or an integer literal.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let trimmed = s.trim();
    let value =
        BigRational::from_str(trimmed).map_err(|_| Error::InvalidRational(s.to_string()))?;
    if let Some((_, den)) = trimmed.split_once('/') {
        if den.trim().starts_with('-') {
            return Err(Error::InvalidRational(s.to_string()));
        }
    }
    Ok(value)
}

pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// A finite space with `α(m) = points[m mod N]` and an explicit distance matrix.
#[derive(Debug, Clone)]
pub struct FiniteSpace {
    label: String,
    matrix: Vec<Vec<BigRational>>,
}

impl FiniteSpace {
    /// Validates the metric axioms exactly on all pairs and triples.
    pub fn new(label: impl Into<String>, matrix: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = matrix.len();
        if n == 0 {
            return Err(Error::InvalidSpace(
                "a space needs at least one point".into(),
            ));
        }
        if matrix.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidSpace("distance matrix must be square".into()));
        }
        for a in 0..n {
            if !matrix[a][a].is_zero() {
                return Err(Error::InvalidSpace(format!("d({a},{a}) must be 0")));
            }
            for b in 0..n {
                if matrix[a][b].is_negative() {
                    return Err(Error::InvalidSpace(format!("d({a},{b}) is negative")));
                }
                if matrix[a][b] != matrix[b][a] {
                    return Err(Error::InvalidSpace(format!("d({a},{b}) is not symmetric")));
                }
                for c in 0..n {
                    if matrix[a][c] > &matrix[a][b] + &matrix[b][c] {
                        return Err(Error::InvalidSpace(format!(
                            "triangle inequality fails for ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteSpace {
            label: label.into(),
            matrix,
        })
    }

    /// Points in `ℚ^d` under the maximum distance.
    pub fn from_coordinates(label: impl Into<String>, points: &[Vec<BigRational>]) -> Result<Self> {
        let matrix = points
            .iter()
            .map(|a| points.iter().map(|b| sup_distance(a, b)).collect())
            .collect();
        FiniteSpace::new(label, matrix)
    }

    /// `n` points at mutual distance 1.
    pub fn discrete(label: impl Into<String>, n: usize) -> Result<Self> {
        let matrix = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        if a == b {
                            BigRational::zero()
                        } else {
                            BigRational::one()
                        }
                    })
                    .collect()
            })
            .collect();
        FiniteSpace::new(label, matrix)
    }

    pub fn len(&self) -> u64 {
        self.matrix.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }
}

fn sup_distance(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .max()
        .unwrap_or_else(BigRational::zero)
}

impl RationalMetricSpace for FiniteSpace {
    fn dist(&self, n: u64, m: u64) -> BigRational {
        let size = self.len();
        self.matrix[(n % size) as usize][(m % size) as usize].clone()
    }

    fn label(&self) -> &str {
        &self.label
    }
}

/// The dyadic rationals of `[0, 1]`: `0, 1, 1/2, 1/4, 3/4, 1/8, …`.
#[derive(Debug, Clone, Default)]
pub struct DyadicInterval;

/// The `m`-th dyadic rational of `[0, 1]`.
pub fn dyadic_point(m: u64) -> BigRational {
    match m {
        0 => BigRational::zero(),
        1 => BigRational::one(),
        _ => {
            let index = m - 2;
            let level = 63 - (index + 1).leading_zeros() as u64;
            let offset = index + 1 - (1u64 << level);
            BigRational::new(BigInt::from(2 * offset + 1), BigInt::one() << (level + 1))
        }
    }
}

impl RationalMetricSpace for DyadicInterval {
    fn dist(&self, n: u64, m: u64) -> BigRational {
        (dyadic_point(n) - dyadic_point(m)).abs()
    }

    fn label(&self) -> &str {
        "dyadic-interval"
    }
}

/// Distance specification of a space file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DistSpec {
    /// `"dyadic"`: maximum distance over the rational coordinates;
    /// `"interval"`: the built-in dyadic interval, ignoring `points`.
    Named(String),
    Matrix(Vec<Vec<String>>),
}

/// Space definition file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceFile {
    pub label: String,
    #[serde(default)]
    pub points: Vec<Vec<String>>,
    pub dist: DistSpec,
}

impl SpaceFile {
    pub fn build(&self) -> Result<Arc<dyn RationalMetricSpace>> {
        match &self.dist {
            DistSpec::Named(name) if name == "interval" => Ok(Arc::new(DyadicInterval)),
            DistSpec::Named(name) if name == "dyadic" => {
                let coords = self
                    .points
                    .iter()
                    .map(|p| {
                        p.iter()
                            .map(|c| parse_rational(c))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                if coords.iter().any(|c| c.len() != coords[0].len()) {
                    return Err(Error::InvalidSpace("points must share a dimension".into()));
                }
                Ok(Arc::new(FiniteSpace::from_coordinates(
                    &self.label,
                    &coords,
                )?))
            }
            DistSpec::Named(name) => Err(Error::InvalidSpace(format!("unknown distance {name:?}"))),
            DistSpec::Matrix(rows) => {
                let matrix = rows
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|c| parse_rational(c))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                if !self.points.is_empty() && self.points.len() != matrix.len() {
                    return Err(Error::InvalidSpace("points and matrix sizes differ".into()));
                }
                Ok(Arc::new(FiniteSpace::new(&self.label, matrix)?))
            }
        }
    }
}

/// The normalizer `f`: `f(p)(n) = p(n)` when `d(α p(n), α f(p)(k)) < 2^{-k-1}`
/// for all `k < n`, and `f(p)(n) = f(p)(n-1)` otherwise.
pub fn cauchy_normalize(p: &[u64], space: &dyn RationalMetricSpace) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(p.len());
    for (n, &candidate) in p.iter().enumerate() {
        let accept = out
            .iter()
            .enumerate()
            .all(|(k, &fk)| space.dist(candidate, fk) < two_pow_neg(k as i64 + 1));
        let value = if accept || n == 0 {
            candidate
        } else {
            out[n - 1]
        };
        out.push(value);
    }
    out
}

/// First `len` values of `f(p)`.
pub fn cauchy_normalize_point(
    p: &BairePoint,
    space: &dyn RationalMetricSpace,
    len: usize,
) -> Vec<u64> {
    cauchy_normalize(&p.prefix(len), space)
}

/// `δ(p)` to precision `2^{-k}`: the index `f(p)(k + 1)`.
pub fn delta_eval(p: &BairePoint, space: &dyn RationalMetricSpace, k: u64) -> u64 {
    cauchy_normalize_point(p, space, k as usize + 2)[k as usize + 1]
}

/// The closure of the open ball `B(α(center), 2^{-precision})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MetricBall {
    pub center: u64,
    pub precision: u32,
}

/// Removal token over metric balls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MetricToken {
    Ball(MetricBall),
    NoBall(NoBallMarker),
}

/// Serialized as `"-"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NoBallMarker;

impl Serialize for NoBallMarker {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str("-")
    }
}

impl<'de> Deserialize<'de> for NoBallMarker {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "-" {
            Ok(NoBallMarker)
        } else {
            Err(serde::de::Error::custom(format!(
                "expected \"-\", found {s:?}"
            )))
        }
    }
}

impl MetricToken {
    pub fn ball(&self) -> Option<MetricBall> {
        match self {
            MetricToken::Ball(b) => Some(*b),
            MetricToken::NoBall(_) => None,
        }
    }
}

/// A closed subset of a metric space named by removed open balls.
pub type MetricNegSet = FiniteGen<MetricToken>;

/// The removal certificate: every point `δ(v·r)` lies within `2^{-|v|+1}` of
/// `α f(v)(|v| - 1)`, so `v` may be removed when that ball sits inside `ball`.
pub fn certifies_removal(
    v: &BaireWord,
    ball: &MetricBall,
    space: &dyn RationalMetricSpace,
) -> bool {
    if v.is_empty() {
        return false;
    }
    let f = cauchy_normalize(&v.0, space);
    let last = f[v.len() - 1];
    let reach = space.dist(ball.center, last) + two_pow_neg(v.len() as i64 - 1);
    reach < two_pow_neg(ball.precision as i64)
}

struct Preimage {
    set: MetricNegSet,
    space: Arc<dyn RationalMetricSpace>,
    bound: u64,
}

impl BaireWordEnum for Preimage {
    fn token(&self, index: u64) -> BaireToken {
        let (word_index, ball_index) = cantor_unpair(index);
        let v = BaireWord::from_number(word_index, self.bound);
        match self.set.at(ball_index).ball() {
            Some(ball) if certifies_removal(&v, &ball, self.space.as_ref()) => BaireToken::Word(v),
            _ => BaireToken::NoBall,
        }
    }
}

/// `δ^{-1}(A)` over `{0..=bound}^ℕ`: token `<v, b>` removes the `v`-th word
/// when the `b`-th removed ball of `A` certifies it.
pub fn preimage_negative(
    set: &MetricNegSet,
    space: Arc<dyn RationalMetricSpace>,
    bound: u64,
) -> BaireNegClosedSet {
    BaireNegClosedSet::new(
        bound,
        Arc::new(Preimage {
            set: set.clone(),
            space,
            bound,
        }),
    )
}

/// `α_{n,k}(m)`: `α_{n,k}(0) = n`; step `t + 1` takes the least index `<= t`
/// not used before with `d(α(n), α(index)) < 2^{-k}`, or falls back to `n`.
pub fn ball_dense_seq(space: &dyn RationalMetricSpace, n: u64, k: u64, m: u64) -> u64 {
    ball_dense_prefix(space, n, k, m + 1)[m as usize]
}

/// `α_{n,k}(0), …, α_{n,k}(len - 1)`.
pub fn ball_dense_prefix(space: &dyn RationalMetricSpace, n: u64, k: u64, len: u64) -> Vec<u64> {
    let radius = two_pow_neg(k as i64);
    let mut used: HashSet<u64> = HashSet::from([n]);
    let mut out = Vec::with_capacity(len as usize);
    if len == 0 {
        return out;
    }
    out.push(n);
    for t in 0..len - 1 {
        let fresh = (0..=t).find(|m| !used.contains(m) && space.dist(n, *m) < radius);
        match fresh {
            Some(m) => {
                used.insert(m);
                out.push(m);
            }
            None => out.push(n),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn line() -> FiniteSpace {
        let pts: Vec<Vec<BigRational>> = ["0", "1/8", "1/2", "1"]
            .iter()
            .map(|s| vec![r(s)])
            .collect();
        FiniteSpace::from_coordinates("line", &pts).unwrap()
    }

    #[test]
    fn rationals() {
        assert_eq!(r("3/6"), r("1/2"));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(two_pow_neg(3), r("1/8"));
        assert_eq!(two_pow_neg(-2), r("4"));
    }

    #[test]
    fn metric_validation() {
        let bad = vec![
            vec![r("0"), r("1"), r("5")],
            vec![r("1"), r("0"), r("1")],
            vec![r("5"), r("1"), r("0")],
        ];
        assert!(FiniteSpace::new("bad", bad).is_err());
        assert_eq!(line().dist(1, 2), r("3/8"));
        assert_eq!(line().dist(5, 2), r("3/8"));
    }

    #[test]
    fn dyadic_enumeration() {
        let got: Vec<BigRational> = (0..6).map(dyadic_point).collect();
        assert_eq!(
            got,
            vec![r("0"), r("1"), r("1/2"), r("1/4"), r("3/4"), r("1/8")]
        );
    }

    #[test]
    fn normalizer_guards() {
        let space = line();
        assert_eq!(cauchy_normalize(&[0, 0, 0], &space), vec![0, 0, 0]);
        // d(1, 0) = 1 > 1/2, so position 1 repeats position 0
        assert_eq!(cauchy_normalize(&[0, 3], &space), vec![0, 0]);
        assert_eq!(cauchy_normalize(&[0, 1], &space), vec![0, 1]);
    }

    #[test]
    fn dense_sequence_starts_at_center() {
        let space = line();
        assert_eq!(ball_dense_seq(&space, 2, 3, 0), 2);
        let seq = ball_dense_prefix(&space, 0, 2, 12);
        assert!(seq.contains(&1));
        assert!(seq.iter().all(|&m| space.dist(0, m) < two_pow_neg(2)));
    }

    #[test]
    fn space_file_parsing() {
        let json = r#"{"label":"pair","points":[["0"],["1/2"]],"dist":"dyadic"}"#;
        let file: SpaceFile = serde_json::from_str(json).unwrap();
        let space = file.build().unwrap();
        assert_eq!(space.dist(0, 1), r("1/2"));
        let m = r#"{"label":"m","points":[["a"],["b"]],"dist":[["0","1"],["1","0"]]}"#;
        assert!(serde_json::from_str::<SpaceFile>(m)
            .unwrap()
            .build()
            .is_ok());
        let t: MetricToken = serde_json::from_str(r#"{"center":1,"precision":2}"#).unwrap();
        assert_eq!(
            t.ball(),
            Some(MetricBall {
                center: 1,
                precision: 2
            })
        );
        assert_eq!(
            serde_json::from_str::<MetricToken>("\"-\"").unwrap().ball(),
            None
        );
    }
}
