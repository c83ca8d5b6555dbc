//! The betting strategy that succeeds on the limit of an approximation
//! whenever a point's gaps outgrow the modulus.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::omega::LeftCEApprox;
use crate::error::{Error, Result};
use crate::spaces::{CantorPoint, Word};

/// Exact martingale betting 3/4 of its capital on the bit it favours at
/// each position, so that `M(σ0) + M(σ1) = 2·M(σ)` and `M(ε) = 1`.
#[derive(Clone)]
pub struct Martingale {
    favoured: Arc<dyn Fn(u64) -> u8 + Send + Sync>,
}

/// One bet in an evaluation trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub position: u64,
    pub favoured: u8,
    pub bit: u8,
    pub won: bool,
    /// Capital after the bet, as `"num/den"`.
    pub capital: String,
}

fn ratio(num: u32, den: u32) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl Martingale {
    pub fn new(favoured: impl Fn(u64) -> u8 + Send + Sync + 'static) -> Self {
        Martingale {
            favoured: Arc::new(favoured),
        }
    }

    pub fn favoured(&self, position: u64) -> u8 {
        (self.favoured)(position)
    }

    pub fn evaluate(&self, sigma: &Word) -> BigRational {
        let wins = sigma
            .bits()
            .iter()
            .enumerate()
            .filter(|(n, &b)| b == self.favoured(*n as u64))
            .count() as u32;
        let losses = sigma.len() as u32 - wins;
        ratio(3, 2).pow(wins as i32) * ratio(1, 2).pow(losses as i32)
    }

    pub fn rounds(&self, sigma: &Word) -> Vec<Round> {
        let mut capital = BigRational::one();
        sigma
            .bits()
            .iter()
            .enumerate()
            .map(|(n, &bit)| {
                let favoured = self.favoured(n as u64);
                let won = bit == favoured;
                capital *= if won { ratio(3, 2) } else { ratio(1, 2) };
                Round {
                    position: n as u64,
                    favoured,
                    bit,
                    won,
                    capital: capital.to_string(),
                }
            })
            .collect()
    }
}

/// `f(n) = min{k > n : p(k) = 1}` for a point with infinitely many ones.
#[derive(Debug, Clone)]
pub struct NextNonzero {
    point: CantorPoint,
}

impl NextNonzero {
    pub fn new(point: CantorPoint) -> Result<Self> {
        if !point.bits().tail_values().contains(&1) {
            return Err(Error::InvalidInstance(
                "the point must have infinitely many ones".into(),
            ));
        }
        Ok(NextNonzero { point })
    }

    pub fn at(&self, n: u64) -> u64 {
        (n + 1..)
            .find(|&k| self.point.bit(k) == 1)
            .expect("infinitely many ones")
    }
}

/// Bets at position `n` on `Ω_{f(n)}(n)`.
pub fn kucera_martingale(
    next_nonzero: impl Fn(u64) -> u64 + Send + Sync + 'static,
    oracle: &Arc<LeftCEApprox>,
) -> Martingale {
    let oracle = oracle.clone();
    Martingale::new(move |n| oracle.bit(n, next_nonzero(n)))
}

/// Capital on the limit prefix of length `3n` against `(9/8)^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthRound {
    pub n: u64,
    pub capital: String,
    pub bound: String,
    pub holds: bool,
}

/// Growth rounds `n = 1..=rounds` on `Ω|_{3n}`.
pub fn growth_rounds(m: &Martingale, oracle: &LeftCEApprox, rounds: u64) -> Vec<GrowthRound> {
    (1..=rounds)
        .map(|n| {
            let capital = m.evaluate(&oracle.limit_prefix(3 * n as usize));
            let bound = ratio(9, 8).pow(n as i32);
            GrowthRound {
                n,
                holds: capital >= bound,
                capital: capital.to_string(),
                bound: bound.to_string(),
            }
        })
        .collect()
}

/// `0^L 1^ω` with `L > c(3·rounds)` and `L >= 3·rounds`, so that
/// `f(n) = L > c(3n)` for every `n <= rounds` and every bet below `3·rounds`
/// uses a settled stage.
pub fn witness_point(oracle: &LeftCEApprox, rounds: u64) -> CantorPoint {
    let zeros = (oracle.modulus(3 * rounds) + 1).max(3 * rounds);
    CantorPoint::padded(
        &Word::from_bits(&vec![0; zeros as usize]).expect("zeros are bits"),
        1,
    )
}
