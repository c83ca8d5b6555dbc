//! Left-c.e. approximations with a declared modulus, and the closed nowhere
//! dense sets avoiding points that bound the modulus.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::closed_sets::{PointEnum, PosClosedSet};
use crate::error::{Error, Result};
use crate::names::cantor_unpair;
use crate::spaces::{CantorPoint, PointToken, Word};

/// A monotone sequence of binary fractions of fixed width, constant after
/// its last stage; bits beyond the width are zero at every stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawApprox", into = "RawApprox")]
pub struct LeftCEApprox {
    stages: Vec<Word>,
    /// `modulus[n]` for `n <= width`; constant beyond.
    modulus: Vec<u64>,
    /// `least[s][n]`: least `s' <= s` with `Ω_t|_n` constant on `[s', s]`.
    least: Vec<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct RawApprox {
    stages: Vec<Word>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    declared_modulus: Option<Vec<u64>>,
}

impl TryFrom<RawApprox> for LeftCEApprox {
    type Error = Error;

    fn try_from(raw: RawApprox) -> Result<Self> {
        LeftCEApprox::new(raw.stages, raw.declared_modulus)
    }
}

impl From<LeftCEApprox> for RawApprox {
    fn from(a: LeftCEApprox) -> Self {
        RawApprox {
            stages: a.stages,
            declared_modulus: Some(a.modulus),
        }
    }
}

fn invalid(msg: String) -> Error {
    Error::InvalidInstance(msg)
}

impl LeftCEApprox {
    /// Validates monotonicity of the stages and that the declared modulus is
    /// nondecreasing and bounds the least modulus from above. Without a
    /// declaration the least modulus is used.
    pub fn new(stages: Vec<Word>, declared: Option<Vec<u64>>) -> Result<Self> {
        let width = stages
            .first()
            .ok_or_else(|| invalid("an approximation needs at least one stage".into()))?
            .len();
        if let Some(s) = stages.iter().position(|x| x.len() != width) {
            return Err(invalid(format!(
                "stage {s} has width {}, expected {width}",
                stages[s].len()
            )));
        }
        if let Some(s) = stages.windows(2).position(|p| p[1].bits() < p[0].bits()) {
            return Err(invalid(format!("stage {} is below stage {s}", s + 1)));
        }
        let least: Vec<Vec<u64>> = (0..stages.len())
            .map(|s| {
                (0..=width)
                    .map(|n| {
                        let here = stages[s].prefix(n);
                        (0..=s)
                            .rev()
                            .take_while(|&t| stages[t].prefix(n) == here)
                            .last()
                            .expect("t = s matches") as u64
                    })
                    .collect()
            })
            .collect();
        let canonical = least.last().expect("non-empty").clone();
        let modulus = match declared {
            None => canonical,
            Some(m) => {
                if m.len() != width + 1 {
                    return Err(invalid(format!(
                        "declared modulus has {} entries, expected {}",
                        m.len(),
                        width + 1
                    )));
                }
                if let Some(n) = m.windows(2).position(|p| p[1] < p[0]) {
                    return Err(invalid(format!("declared modulus decreases at {}", n + 1)));
                }
                if let Some(n) = (0..=width).find(|&n| m[n] < canonical[n]) {
                    return Err(invalid(format!(
                        "declared modulus {} at {n} is below the least modulus {}",
                        m[n], canonical[n]
                    )));
                }
                m
            }
        };
        Ok(LeftCEApprox {
            stages,
            modulus,
            least,
        })
    }

    /// Stage `s` is the binary expansion of `⌊target · min(s, steps) / steps⌋`
    /// at the width of `target`.
    pub fn linear(target: &Word, steps: u64) -> Result<Self> {
        let width = target.len();
        if width > 63 || steps == 0 {
            return Err(invalid(
                "linear approximation needs width <= 63 and steps >= 1".into(),
            ));
        }
        let goal = target.binary_value();
        let stages = (0..=steps)
            .map(|s| {
                Word::from_binary_value(((goal as u128 * s as u128) / steps as u128) as u64, width)
            })
            .collect();
        Self::new(stages, None)
    }

    pub fn width(&self) -> usize {
        self.stages[0].len()
    }

    pub fn last_stage(&self) -> u64 {
        self.stages.len() as u64 - 1
    }

    fn stage(&self, s: u64) -> &Word {
        &self.stages[s.min(self.last_stage()) as usize]
    }

    /// `Ω_s(n)`.
    pub fn bit(&self, n: u64, s: u64) -> u8 {
        self.stage(s).get(n as usize).unwrap_or(0)
    }

    pub fn limit_bit(&self, n: u64) -> u8 {
        self.bit(n, self.last_stage())
    }

    /// `Ω|_len`.
    pub fn limit_prefix(&self, len: usize) -> Word {
        (0..len as u64).fold(Word::empty(), |w, n| w.extended(self.limit_bit(n)))
    }

    /// Declared modulus `c(n)`: `Ω_t|_n = Ω|_n` for every `t >= c(n)`.
    pub fn modulus(&self, n: u64) -> u64 {
        self.modulus[(n as usize).min(self.width())]
    }

    /// Least modulus, computed from the stages.
    pub fn least_modulus(&self, n: u64) -> u64 {
        self.least[self.last_stage() as usize][(n as usize).min(self.width())]
    }

    /// `c_s(n)`: nondecreasing in both arguments and equal to `c(n)` from
    /// stage `c(n)` on.
    pub fn modulus_stage(&self, n: u64, s: u64) -> u64 {
        let least = self.least[s.min(self.last_stage()) as usize][(n as usize).min(self.width())];
        least.max(s.min(self.modulus(n)))
    }
}

/// `w·1^ω` lies in `{p : ∀n >= i, p|_n 0^{c(3n)} ⋢ p}` for the modulus
/// `c`, which must be nondecreasing. Positions at or past `|w|` are ones, so
/// only blocks inside `w` and the emptiness of blocks matter.
pub fn avoids_zero_blocks(w: &Word, from: u64, modulus: impl Fn(u64) -> u64) -> bool {
    let len = w.len() as u64;
    if modulus(3 * from.max(len)) == 0 {
        return false;
    }
    (from..len).all(|n| {
        let c = modulus(3 * n);
        c >= 1
            && (n + c > len
                || w.bits()[n as usize..(n + c) as usize]
                    .iter()
                    .any(|&b| b != 0))
    })
}

struct LowOmegaList {
    oracle: Arc<LeftCEApprox>,
    from: u64,
}

impl PointEnum for LowOmegaList {
    fn point(&self, index: u64) -> PointToken {
        let (x, s) = cantor_unpair(index);
        let w = Word::from_number(x);
        if avoids_zero_blocks(&w, self.from, |n| self.oracle.modulus_stage(n, s)) {
            PointToken::Point(CantorPoint::padded(&w, 1))
        } else {
            PointToken::Inf
        }
    }
}

/// Member `i` is the closure of `{p : ∀n >= i, p|_n 0^{c(3n)} ⋢ p}`.
///
/// Position `⟨x, s⟩` lists `word(x)·1^ω` when the word passes the check
/// against the stage-`s` modulus, else `∞`. Since `c_s <= c`, every listed
/// point lies in the set, and from stage `c` on every member `w·1^ω` is
/// listed, which makes the list dense.
pub fn low_for_omega_family(oracle: &Arc<LeftCEApprox>, i: u64) -> PosClosedSet {
    PosClosedSet::new(Arc::new(LowOmegaList {
        oracle: oracle.clone(),
        from: i,
    }))
}
