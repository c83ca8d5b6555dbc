//! Explicit comeager sets given as complements of countable unions of
//! closed nowhere dense sets.

mod martingale;
mod omega;
mod programs;

use std::sync::Arc;

pub use martingale::{
    growth_rounds, kucera_martingale, witness_point, GrowthRound, Martingale, NextNonzero, Round,
};
pub use omega::{avoids_zero_blocks, low_for_omega_family, LeftCEApprox};
pub use programs::{noncomputable_family, ProgramEntry, ProgramTable, StepResult};

use crate::closed_sets::PosClosedSet;

/// Interleaves the two families: member `2i` excludes the function of table
/// entry `i` (empty past the table), member `2i + 1` is the low-for-`Ω`
/// set with index `i`.
#[derive(Clone)]
pub struct ComeagerFamily {
    programs: Vec<PosClosedSet>,
    oracle: Arc<LeftCEApprox>,
}

impl ComeagerFamily {
    pub fn new(table: &ProgramTable, oracle: Arc<LeftCEApprox>) -> Self {
        ComeagerFamily {
            programs: noncomputable_family(table),
            oracle,
        }
    }

    pub fn member(&self, index: u64) -> PosClosedSet {
        let i = index / 2;
        if index % 2 == 1 {
            low_for_omega_family(&self.oracle, i)
        } else {
            self.programs
                .get(i as usize)
                .cloned()
                .unwrap_or_else(PosClosedSet::empty_set)
        }
    }
}
