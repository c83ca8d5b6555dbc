//! Finitely generated closed-set names: a finite head plus a tail rule.

use serde::{Deserialize, Serialize};

use super::{
    ClosedSet, ClusterClosedSet, JumpEnum, NegClosedSet, NegClosedSetJump, PointEnum, PosClosedSet,
    SharpClosedSet, WordEnum,
};
use crate::error::{Error, Result};
use crate::names::{FiniteGen, Tail};
use crate::spaces::{covers, CantorPoint, PointToken, Token, Word};

/// Finite data describing the removal tail "every word missing these points
/// and balls".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct OutsideSpec {
    #[serde(default)]
    pub points: Vec<CantorPoint>,
    #[serde(default)]
    pub balls: Vec<Word>,
}

impl OutsideSpec {
    /// Neither a listed point nor a listed ball meets `w·2^ℕ`.
    pub fn is_outside(&self, w: &Word) -> bool {
        self.points.iter().all(|p| !p.extends(w)) && self.balls.iter().all(|b| !b.compatible(w))
    }

    fn relevant_points<'a>(&'a self, x: &Word) -> Vec<&'a CantorPoint> {
        self.points.iter().filter(|p| p.extends(x)).collect()
    }

    /// Least word of length `len` extending `v` whose ball misses every
    /// listed point and ball.
    fn least_free_extension(&self, v: &Word, len: usize) -> Option<Word> {
        let points = self.relevant_points(v);
        let balls: Vec<&Word> = self.balls.iter().filter(|b| b.compatible(v)).collect();
        free_dfs(v.clone(), len, &points, &balls)
    }
}

fn free_dfs(x: Word, len: usize, points: &[&CantorPoint], balls: &[&Word]) -> Option<Word> {
    if balls.iter().any(|b| b.is_prefix_of(&x)) {
        return None;
    }
    if points.is_empty() && balls.is_empty() {
        let mut out = x;
        while out.len() < len {
            out.push(0);
        }
        return Some(out);
    }
    if x.len() >= len {
        return None;
    }
    for bit in [0u8, 1] {
        let child = x.extended(bit);
        let ps: Vec<&CantorPoint> = points
            .iter()
            .copied()
            .filter(|p| p.extends(&child))
            .collect();
        let bs: Vec<&Word> = balls
            .iter()
            .copied()
            .filter(|b| b.compatible(&child))
            .collect();
        if let Some(found) = free_dfs(child, len, &ps, &bs) {
            return Some(found);
        }
    }
    None
}

/// Longest word the analytic searches will construct.
const MAX_SEARCH_LEN: usize = 62;

/// Tail rule of a word-token stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WordTail {
    RepeatLast,
    Constant(Token),
    Cycle(Vec<Token>),
    /// Tail position `t` holds the word numbered `t` when its ball misses
    /// every listed point and ball, and `NoBall` otherwise.
    Outside(OutsideSpec),
    /// Tail position `t` holds the word numbered `t` unless it is listed,
    /// in which case it holds `NoBall`.
    AllExcept(Vec<Word>),
}

/// A finitely generated stream of word tokens.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawWordStream")]
pub struct WordStreamSpec {
    head: Vec<Token>,
    tail: WordTail,
}

#[derive(Deserialize)]
struct RawWordStream {
    #[serde(default)]
    head: Vec<Token>,
    tail: WordTail,
}

impl TryFrom<RawWordStream> for WordStreamSpec {
    type Error = Error;

    fn try_from(raw: RawWordStream) -> Result<Self> {
        WordStreamSpec::new(raw.head, raw.tail)
    }
}

impl WordStreamSpec {
    pub fn new(head: Vec<Token>, tail: WordTail) -> Result<Self> {
        match &tail {
            WordTail::RepeatLast if head.is_empty() => return Err(Error::RepeatLastWithoutHead),
            WordTail::Cycle(c) if c.is_empty() => return Err(Error::EmptyCycle),
            _ => {}
        }
        Ok(WordStreamSpec { head, tail })
    }

    pub fn constant(token: Token) -> Self {
        WordStreamSpec {
            head: Vec::new(),
            tail: WordTail::Constant(token),
        }
    }

    /// `head` followed by `fill` forever.
    pub fn listed(head: Vec<Token>, fill: Token) -> Self {
        WordStreamSpec {
            head,
            tail: WordTail::Constant(fill),
        }
    }

    /// Removal of every ball that misses the given points and balls.
    pub fn outside(head: Vec<Token>, points: Vec<CantorPoint>, balls: Vec<Word>) -> Self {
        WordStreamSpec {
            head,
            tail: WordTail::Outside(OutsideSpec { points, balls }),
        }
    }

    pub fn all_except(head: Vec<Token>, excluded: Vec<Word>) -> Self {
        WordStreamSpec {
            head,
            tail: WordTail::AllExcept(excluded),
        }
    }

    pub fn head(&self) -> &[Token] {
        &self.head
    }

    pub fn tail(&self) -> &WordTail {
        &self.tail
    }

    pub fn at(&self, index: u64) -> Token {
        let h = self.head.len() as u64;
        if index < h {
            return self.head[index as usize].clone();
        }
        let t = index - h;
        match &self.tail {
            WordTail::RepeatLast => self.head.last().expect("validated").clone(),
            WordTail::Constant(c) => c.clone(),
            WordTail::Cycle(c) => c[(t % c.len() as u64) as usize].clone(),
            WordTail::Outside(o) => {
                let w = Word::from_number(t);
                if o.is_outside(&w) {
                    Token::Word(w)
                } else {
                    Token::NoBall
                }
            }
            WordTail::AllExcept(excluded) => {
                let w = Word::from_number(t);
                if excluded.contains(&w) {
                    Token::NoBall
                } else {
                    Token::Word(w)
                }
            }
        }
    }

    fn first_in_tail(&self, v: &Word, limit: u64) -> Option<(u64, Word)> {
        let h = self.head.len() as u64;
        if limit <= h {
            return None;
        }
        let hit = |pos: u64, t: &Token| match t {
            Token::Word(u) if u.compatible(v) && pos < limit => Some((pos, u.clone())),
            _ => None,
        };
        match &self.tail {
            WordTail::RepeatLast => hit(h, self.head.last().expect("validated")),
            WordTail::Constant(c) => hit(h, c),
            WordTail::Cycle(c) => c.iter().enumerate().find_map(|(j, t)| hit(h + j as u64, t)),
            WordTail::Outside(o) => {
                let budget = limit - h;
                for len in 0..=v.len() {
                    let u = v.prefix(len);
                    if u.number() >= budget {
                        return None;
                    }
                    if o.is_outside(&u) {
                        return Some((h + u.number(), u));
                    }
                }
                if covers(&o.balls, v) || o.balls.iter().any(|b| b.is_prefix_of(v)) {
                    return None;
                }
                for len in v.len() + 1..=MAX_SEARCH_LEN {
                    if (1u64 << len) > budget {
                        return None;
                    }
                    if let Some(u) = o.least_free_extension(v, len) {
                        return (u.number() < budget).then(|| (h + u.number(), u));
                    }
                }
                None
            }
            WordTail::AllExcept(excluded) => {
                let budget = limit - h;
                let candidates = (0..=v.len()).map(|len| v.prefix(len)).chain(
                    (v.len() + 1..=MAX_SEARCH_LEN).flat_map(|len| {
                        let extra = len - v.len();
                        let base = v.clone();
                        (0..(1u64 << extra.min(20))).map(move |x| {
                            let mut u = base.clone();
                            for i in (0..extra).rev() {
                                u.push(((x >> i) & 1) as u8);
                            }
                            u
                        })
                    }),
                );
                for u in candidates {
                    if u.number() >= budget {
                        return None;
                    }
                    if !excluded.contains(&u) {
                        return Some((h + u.number(), u));
                    }
                }
                None
            }
        }
    }
}

impl WordEnum for WordStreamSpec {
    fn token(&self, index: u64) -> Token {
        self.at(index)
    }

    fn first_compatible(&self, v: &Word, limit: u64) -> Option<(u64, Word)> {
        let head_hit = self
            .head
            .iter()
            .enumerate()
            .take(limit.min(self.head.len() as u64) as usize)
            .find_map(|(i, t)| match t {
                Token::Word(u) if u.compatible(v) => Some((i as u64, u.clone())),
                _ => None,
            });
        head_hit.or_else(|| self.first_in_tail(v, limit))
    }
}

/// Tail rule of a point-token stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointTail {
    RepeatLast,
    Constant(PointToken),
    Cycle(Vec<PointToken>),
    /// Tail position `t` holds `balls[t mod n]·word(t div n)·0^ω`: a list
    /// dense in the union of the balls.
    Dense {
        balls: Vec<Word>,
    },
}

/// A finitely generated stream of point tokens.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPointStream")]
pub struct PointStreamSpec {
    head: Vec<PointToken>,
    tail: PointTail,
}

#[derive(Deserialize)]
struct RawPointStream {
    #[serde(default)]
    head: Vec<PointToken>,
    tail: PointTail,
}

impl TryFrom<RawPointStream> for PointStreamSpec {
    type Error = Error;

    fn try_from(raw: RawPointStream) -> Result<Self> {
        PointStreamSpec::new(raw.head, raw.tail)
    }
}

impl PointStreamSpec {
    pub fn new(head: Vec<PointToken>, tail: PointTail) -> Result<Self> {
        match &tail {
            PointTail::RepeatLast if head.is_empty() => return Err(Error::RepeatLastWithoutHead),
            PointTail::Cycle(c) if c.is_empty() => return Err(Error::EmptyCycle),
            PointTail::Dense { balls } if balls.is_empty() => {
                return Err(Error::InvalidInstance(
                    "dense tail needs at least one ball".into(),
                ))
            }
            _ => {}
        }
        Ok(PointStreamSpec { head, tail })
    }

    pub fn constant(token: PointToken) -> Self {
        PointStreamSpec {
            head: Vec::new(),
            tail: PointTail::Constant(token),
        }
    }

    /// The listed points followed by `∞` forever.
    pub fn finite(points: Vec<CantorPoint>) -> Self {
        PointStreamSpec {
            head: points.into_iter().map(PointToken::Point).collect(),
            tail: PointTail::Constant(PointToken::Inf),
        }
    }

    /// A list dense in the union of `balls`.
    pub fn dense(balls: Vec<Word>) -> Self {
        PointStreamSpec {
            head: Vec::new(),
            tail: PointTail::Dense { balls },
        }
    }

    pub fn with_head(mut self, head: Vec<PointToken>) -> Self {
        self.head = head;
        self
    }

    pub fn head(&self) -> &[PointToken] {
        &self.head
    }

    pub fn tail(&self) -> &PointTail {
        &self.tail
    }

    pub fn at(&self, index: u64) -> PointToken {
        let h = self.head.len() as u64;
        if index < h {
            return self.head[index as usize].clone();
        }
        let t = index - h;
        match &self.tail {
            PointTail::RepeatLast => self.head.last().expect("validated").clone(),
            PointTail::Constant(c) => c.clone(),
            PointTail::Cycle(c) => c[(t % c.len() as u64) as usize].clone(),
            PointTail::Dense { balls } => {
                let n = balls.len() as u64;
                let prefix = balls[(t % n) as usize].concat(&Word::from_number(t / n));
                PointToken::Point(CantorPoint::padded(&prefix, 0))
            }
        }
    }
}

impl PointEnum for PointStreamSpec {
    fn point(&self, index: u64) -> PointToken {
        self.at(index)
    }
}

/// A finite double list of word tokens: `columns[c]` is indexed by stage;
/// columns past the list are constantly `NoBall`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NegJumpSpec {
    pub columns: Vec<FiniteGen<Token>>,
}

impl NegJumpSpec {
    pub fn new(columns: Vec<FiniteGen<Token>>) -> Self {
        NegJumpSpec { columns }
    }

    /// Least stage from which each column is constant.
    pub fn stabilization(&self) -> Vec<u64> {
        self.columns.iter().map(column_stabilization).collect()
    }

    /// The limit token of every column.
    pub fn limits(&self) -> Vec<Token> {
        self.columns
            .iter()
            .map(|c| c.at(column_stabilization(c)).clone())
            .collect()
    }

    /// Checks the declared stabilization stages by replay.
    pub fn validate(&self, declared: &[u64]) -> Result<()> {
        if declared.len() != self.columns.len() {
            return Err(Error::InvalidInstance(format!(
                "{} stabilization stages declared for {} columns",
                declared.len(),
                self.columns.len()
            )));
        }
        for (c, (col, &stage)) in self.columns.iter().zip(declared).enumerate() {
            let horizon = stage.max(col.head().len() as u64) + col.period() as u64;
            let anchor = col.at(stage);
            if let Some(bad) = (stage..=horizon).find(|&s| col.at(s) != anchor) {
                return Err(Error::StabilizationViolated {
                    column: c as u64,
                    stage: bad,
                    declared: stage,
                });
            }
        }
        Ok(())
    }
}

fn column_stabilization(col: &FiniteGen<Token>) -> u64 {
    let constant_tail = match col.tail() {
        Tail::RepeatLast | Tail::Constant(_) => true,
        Tail::Cycle(c) => c.iter().all(|t| *t == c[0]),
    };
    if !constant_tail {
        return u64::MAX;
    }
    let limit = col.at(col.head().len() as u64).clone();
    let mut stage = col.head().len() as u64;
    while stage > 0 && *col.at(stage - 1) == limit {
        stage -= 1;
    }
    stage
}

impl JumpEnum for NegJumpSpec {
    fn entry(&self, column: u64, stage: u64) -> Token {
        self.columns
            .get(column as usize)
            .map_or(Token::NoBall, |c| c.at(stage).clone())
    }
}

/// Closed-set representation tags used in instance files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Repr {
    Neg,
    Pos,
    Cluster,
    Sharp,
    Negjump,
}

impl std::str::FromStr for Repr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::InvalidInstance(format!("unknown representation {s:?}")))
    }
}

/// Closed-set instance file: `{"repr", "data", "stabilization"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedSetFile {
    pub repr: Repr,
    pub data: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stabilization: Option<Vec<u64>>,
}

/// A parsed closed-set payload, kept in its finite form.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedSetSpec {
    Neg(WordStreamSpec),
    Pos(PointStreamSpec),
    Cluster(PointStreamSpec),
    Sharp(WordStreamSpec),
    NegJump(NegJumpSpec),
}

impl ClosedSetFile {
    pub fn parse(&self) -> Result<ClosedSetSpec> {
        let data = self.data.clone();
        Ok(match self.repr {
            Repr::Neg => ClosedSetSpec::Neg(serde_json::from_value(data)?),
            Repr::Pos => ClosedSetSpec::Pos(serde_json::from_value(data)?),
            Repr::Cluster => ClosedSetSpec::Cluster(serde_json::from_value(data)?),
            Repr::Sharp => ClosedSetSpec::Sharp(serde_json::from_value(data)?),
            Repr::Negjump => {
                let spec: NegJumpSpec = serde_json::from_value(data)?;
                match &self.stabilization {
                    Some(declared) => spec.validate(declared)?,
                    None => {
                        return Err(Error::InvalidInstance(
                            "negjump instances must declare per-column stabilization stages".into(),
                        ))
                    }
                }
                ClosedSetSpec::NegJump(spec)
            }
        })
    }

    pub fn from_spec(spec: &ClosedSetSpec) -> Self {
        let (repr, data, stabilization) = match spec {
            ClosedSetSpec::Neg(s) => (Repr::Neg, serde_json::to_value(s), None),
            ClosedSetSpec::Pos(s) => (Repr::Pos, serde_json::to_value(s), None),
            ClosedSetSpec::Cluster(s) => (Repr::Cluster, serde_json::to_value(s), None),
            ClosedSetSpec::Sharp(s) => (Repr::Sharp, serde_json::to_value(s), None),
            ClosedSetSpec::NegJump(s) => (
                Repr::Negjump,
                serde_json::to_value(s),
                Some(s.stabilization()),
            ),
        };
        ClosedSetFile {
            repr,
            data: data.expect("specs serialize"),
            stabilization,
        }
    }
}

impl ClosedSetSpec {
    pub fn build(&self) -> ClosedSet {
        match self.clone() {
            ClosedSetSpec::Neg(s) => ClosedSet::Neg(NegClosedSet::from_spec(s)),
            ClosedSetSpec::Pos(s) => ClosedSet::Pos(PosClosedSet::from_spec(s)),
            ClosedSetSpec::Cluster(s) => ClosedSet::Cluster(ClusterClosedSet::from_spec(s)),
            ClosedSetSpec::Sharp(s) => ClosedSet::Sharp(SharpClosedSet::from_spec(s)),
            ClosedSetSpec::NegJump(s) => ClosedSet::NegJump(NegClosedSetJump::from_spec(s)),
        }
    }

    pub fn repr(&self) -> Repr {
        match self {
            ClosedSetSpec::Neg(_) => Repr::Neg,
            ClosedSetSpec::Pos(_) => Repr::Pos,
            ClosedSetSpec::Cluster(_) => Repr::Cluster,
            ClosedSetSpec::Sharp(_) => Repr::Sharp,
            ClosedSetSpec::NegJump(_) => Repr::Negjump,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::w;

    fn brute_first(spec: &WordStreamSpec, v: &Word, limit: u64) -> Option<(u64, Word)> {
        (0..limit).find_map(|i| match spec.at(i) {
            Token::Word(u) if u.compatible(v) => Some((i, u)),
            _ => None,
        })
    }

    #[test]
    fn outside_tail_matches_scan() {
        let pts = vec![
            CantorPoint::padded(&w("0"), 0),
            CantorPoint::periodic(&w("1"), &w("01")),
        ];
        let spec =
            WordStreamSpec::outside(vec![Token::NoBall, w("111").into()], pts, vec![w("0110")]);
        for n in 0..200 {
            let v = Word::from_number(n);
            assert_eq!(
                spec.first_compatible(&v, 3000),
                brute_first(&spec, &v, 3000),
                "v = {v}"
            );
        }
        assert_eq!(spec.first_compatible(&w("01101"), 3000), None);
    }

    #[test]
    fn all_except_matches_scan() {
        let spec = WordStreamSpec::all_except(vec![], vec![w(""), w("0"), w("01"), w("010")]);
        for n in 0..100 {
            let v = Word::from_number(n);
            assert_eq!(
                spec.first_compatible(&v, 500),
                brute_first(&spec, &v, 500),
                "v = {v}"
            );
        }
    }

    #[test]
    fn periodic_tails_match_scan() {
        let spec = WordStreamSpec::new(
            vec![Token::NoBall],
            WordTail::Cycle(vec![Token::NoBall, w("10").into()]),
        )
        .unwrap();
        assert_eq!(spec.first_compatible(&w("1"), 10), Some((2, w("10"))));
        assert_eq!(spec.first_compatible(&w("0"), 10), None);
        assert_eq!(spec.first_compatible(&w("1"), 2), None);
    }

    #[test]
    fn dense_points() {
        let spec = PointStreamSpec::dense(vec![w("1"), w("00")]);
        assert_eq!(spec.at(0).point().unwrap().prefix(3), w("100"));
        assert_eq!(spec.at(1).point().unwrap().prefix(3), w("000"));
        assert_eq!(spec.at(2).point().unwrap().prefix(3), w("100"));
        assert_eq!(spec.at(4).point().unwrap().prefix(3), w("110"));
    }

    #[test]
    fn stabilization_and_validation() {
        let col = FiniteGen::new(
            vec![Token::NoBall, w("0").into(), w("1").into()],
            Tail::RepeatLast,
        )
        .unwrap();
        let spec = NegJumpSpec::new(vec![col, FiniteGen::constant(w("11").into())]);
        assert_eq!(spec.stabilization(), vec![2, 0]);
        assert!(spec.validate(&[2, 0]).is_ok());
        assert!(matches!(
            spec.validate(&[1, 0]),
            Err(Error::StabilizationViolated { column: 0, .. })
        ));
        assert_eq!(spec.limits(), vec![w("1").into(), w("11").into()]);
    }

    #[test]
    fn closed_set_file_round_trip() {
        let json = r#"{"repr":"neg","data":{"head":["1","-"],"tail":{"outside":{"points":[{"head":[],"tail":{"constant":0}}]}}}}"#;
        let file: ClosedSetFile = serde_json::from_str(json).unwrap();
        let spec = file.parse().unwrap();
        assert_eq!(ClosedSetFile::from_spec(&spec).parse().unwrap(), spec);
        let bad = r#"{"repr":"negjump","data":{"columns":[]}}"#;
        assert!(serde_json::from_str::<ClosedSetFile>(bad)
            .unwrap()
            .parse()
            .is_err());
    }
}
