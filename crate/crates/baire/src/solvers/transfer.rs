//! Avoiding closed subsets of `{0..=bound}^ℕ` inside Baire space, directly
//! and through the embedding into Cantor space.

use serde::{Deserialize, Serialize};

use super::{bct0_solve, Bct0Instance, Bct0Solution, SetFamily};
use crate::closed_sets::NegClosedSet;
use crate::names::{FiniteGen, Outcome};
use crate::spaces::{
    iota_cover_set, iota_image_set, iota_inverse_exact, BaireNegClosedSet, BairePoint, BaireToken,
    BaireWord,
};

/// A removed Baire ball, or a symbol outside the alphabet, containing the output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaireEscape {
    Removed {
        set_index: u64,
        ball: BaireWord,
        position: u64,
    },
    /// Position `at` holds `bound + 1`, which no member of the set uses.
    OutsideAlphabet { set_index: u64, at: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaireBct0Solution {
    /// The output point is `prefix·0^ω`.
    pub prefix: BaireWord,
    pub escapes: Vec<BaireEscape>,
}

impl BaireBct0Solution {
    pub fn point(&self) -> BairePoint {
        FiniteGen::padded(self.prefix.0.clone(), 0)
    }
}

/// Escapes each set through the first removed ball compatible with the
/// prefix among `fuel` tokens, falling back to the symbol `bound + 1`; each
/// escape is followed by a `0`.
pub fn baire_bct0_solve(sets: &[BaireNegClosedSet], fuel: u64) -> BaireBct0Solution {
    let mut v = BaireWord::default();
    let mut escapes = Vec::with_capacity(sets.len());
    for (i, set) in sets.iter().enumerate() {
        let hit = (0..fuel).find_map(|t| match set.token(t) {
            BaireToken::Word(u) if u.compatible(&v) => Some((t, u)),
            _ => None,
        });
        match hit {
            Some((position, u)) => {
                if u.len() > v.len() {
                    v = u.clone();
                }
                escapes.push(BaireEscape::Removed {
                    set_index: i as u64,
                    ball: u,
                    position,
                });
            }
            None => {
                escapes.push(BaireEscape::OutsideAlphabet {
                    set_index: i as u64,
                    at: v.len(),
                });
                v.0.push(set.bound() + 1);
            }
        }
        v.0.push(0);
    }
    BaireBct0Solution { prefix: v, escapes }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferSolution {
    pub cantor: Bct0Solution,
    /// `ι⁻¹` of the Cantor answer.
    pub point: BairePoint,
}

/// The Cantor family for the chain: member `2i` is the image of set `i`
/// (the empty set once the sets run out), member `2i + 1` is the `i`-th
/// nowhere dense set covering the complement of the range of `ι`.
pub fn transfer_family(sets: &[BaireNegClosedSet], rounds: u64) -> SetFamily {
    let images: Vec<NegClosedSet> = sets.iter().map(iota_image_set).collect();
    SetFamily::from_fn(2 * rounds, move |k| {
        let i = k / 2;
        if k % 2 == 1 {
            iota_cover_set(i)
        } else {
            images
                .get(i as usize)
                .cloned()
                .unwrap_or_else(NegClosedSet::empty_set)
        }
    })
}

/// Solves the Baire instance by the Cantor diagonalizer on
/// [`transfer_family`] with `rounds >= sets.len()` and pulls the answer back.
/// The Cantor output ends in `0^ω`, so it lies in the range of `ι`.
pub fn bct0_via_cantor(
    sets: &[BaireNegClosedSet],
    rounds: u64,
    fuel: u64,
) -> Outcome<TransferSolution> {
    let rounds = rounds.max(sets.len() as u64);
    let inst = Bct0Instance {
        sets: transfer_family(sets, rounds),
        nowhere_dense_certified: None,
    };
    let Outcome::Value(cantor) = bct0_solve(&inst, fuel) else {
        return Outcome::Inconclusive;
    };
    match iota_inverse_exact(&cantor.point()) {
        Outcome::Value(point) => Outcome::Value(TransferSolution { cantor, point }),
        Outcome::Inconclusive => unreachable!("a point ending in zeros has an exact preimage"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{baire_constant, BaireStreamSpec};

    fn avoids(p: &BairePoint, set: &BaireNegClosedSet, depth: usize, fuel: u64) -> bool {
        let prefix = BaireWord(p.prefix(depth));
        prefix.0.iter().any(|&a| a > set.bound())
            || !set.depth_truncate(depth, fuel).contains(&prefix)
    }

    #[test]
    fn both_routes_avoid() {
        let sets: Vec<BaireNegClosedSet> = (0..3u64)
            .map(|c| {
                BaireNegClosedSet::from_spec(
                    BaireStreamSpec::outside(2, vec![], vec![baire_constant(c)]).unwrap(),
                )
            })
            .collect();
        let direct = baire_bct0_solve(&sets, 500);
        let chained = bct0_via_cantor(&sets, 4, 20_000).value().unwrap();
        for set in &sets {
            assert!(avoids(&direct.point(), set, 6, 2000));
            assert!(avoids(&chained.point, set, 6, 2000));
        }
    }
}
