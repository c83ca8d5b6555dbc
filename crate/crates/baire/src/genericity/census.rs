//! Exhaustive and sampled advice censuses.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::fireworks::all_tuples;
use super::{fireworks_1gen, Advice, CeOpenFamily, Inconclusive};
use crate::error::{Error, Result};
use crate::par::Executor;
use crate::random::seeded_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AdviceStatus {
    Success,
    DeadSearch { column: u64, stage: u64 },
    FuelExhausted { stage: u64 },
}

impl AdviceStatus {
    fn of(result: &std::result::Result<crate::spaces::Word, Inconclusive>) -> Self {
        match result {
            Ok(_) => AdviceStatus::Success,
            Err(Inconclusive::DeadSearch { column, stage, .. }) => AdviceStatus::DeadSearch {
                column: *column,
                stage: *stage,
            },
            Err(Inconclusive::FuelExhausted { stage }) => {
                AdviceStatus::FuelExhausted { stage: *stage }
            }
        }
    }

    pub fn is_success(&self) -> bool {
        matches!(self, AdviceStatus::Success)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdviceOutcome {
    pub blocks: Vec<u64>,
    #[serde(flatten)]
    pub status: AdviceStatus,
}

/// Failures attributed to one column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnMarginal {
    pub column: u64,
    /// Failing value of `n_column` and how many tuples fail with it.
    pub failing_values: BTreeMap<u64, u64>,
    /// Largest number of failing `n_column` values with all other blocks fixed.
    pub max_conditional_multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub k: u32,
    pub i_max: u64,
    pub fuel: u64,
    pub total: u64,
    pub successes: u64,
    pub dead_searches: u64,
    pub fuel_exhausted: u64,
    /// `failures / total` as an exact fraction `"num/den"`.
    pub failure_fraction: String,
    /// `failures · 2^k <= total`; fuel exhaustion counts as failure.
    pub bound_holds: bool,
    pub marginals: Vec<ColumnMarginal>,
    pub outcomes: Vec<AdviceOutcome>,
}

impl CensusReport {
    pub fn failures(&self) -> u64 {
        self.total - self.successes
    }

    /// Every column has at most one failing value per choice of the others.
    pub fn multiplicity_holds(&self) -> bool {
        self.marginals
            .iter()
            .all(|m| m.max_conditional_multiplicity <= 1)
    }
}

fn marginal(outcomes: &[AdviceOutcome], column: usize) -> ColumnMarginal {
    let mut failing_values = BTreeMap::new();
    let mut per_context: HashMap<Vec<u64>, u64> = HashMap::new();
    for o in outcomes {
        if let AdviceStatus::DeadSearch { column: c, .. } = o.status {
            if c as usize == column {
                *failing_values.entry(o.blocks[column]).or_insert(0) += 1;
                let mut context = o.blocks.clone();
                context.remove(column);
                *per_context.entry(context).or_insert(0) += 1;
            }
        }
    }
    ColumnMarginal {
        column: column as u64,
        failing_values,
        max_conditional_multiplicity: per_context.values().copied().max().unwrap_or(0),
    }
}

/// Runs every tuple `(n_0, …, n_{i_max})`; the family may have at most
/// `i_max + 1` columns.
pub fn advice_census(
    fam: &CeOpenFamily,
    k: u32,
    i_max: u64,
    fuel: u64,
    exec: Executor,
) -> Result<CensusReport> {
    if fam.len() as u64 > i_max + 1 {
        return Err(Error::InvalidInstance(format!(
            "family has {} columns, more than i_max + 1 = {}",
            fam.len(),
            i_max + 1
        )));
    }
    let tuples = all_tuples(k, i_max as usize + 1);
    let outcomes: Vec<AdviceOutcome> = exec.map(tuples, |blocks| {
        let advice = Advice { k, blocks };
        let run = fireworks_1gen(fam, &advice, fuel).expect("tuples are in range");
        AdviceOutcome {
            status: AdviceStatus::of(&run.result),
            blocks: advice.blocks,
        }
    });
    let total = outcomes.len() as u64;
    let successes = outcomes.iter().filter(|o| o.status.is_success()).count() as u64;
    let dead_searches = outcomes
        .iter()
        .filter(|o| matches!(o.status, AdviceStatus::DeadSearch { .. }))
        .count() as u64;
    let failures = total - successes;
    let marginals = (0..=i_max as usize)
        .map(|c| marginal(&outcomes, c))
        .collect();
    Ok(CensusReport {
        k,
        i_max,
        fuel,
        total,
        successes,
        dead_searches,
        fuel_exhausted: failures - dead_searches,
        failure_fraction: format!("{failures}/{total}"),
        bound_holds: (failures << k) <= total,
        marginals,
        outcomes,
    })
}

/// Census estimate from uniformly drawn advice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub k: u32,
    pub i_max: u64,
    pub samples: u64,
    pub failures: u64,
    pub seed: u64,
    /// Wilson score interval for the failure probability at 95% confidence.
    pub interval: (f64, f64),
}

fn wilson(failures: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = n as f64;
    let p = failures as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Samples `samples` advice tuples with a seeded generator, for parameters
/// beyond exhaustive reach.
pub fn advice_sample(
    fam: &CeOpenFamily,
    k: u32,
    i_max: u64,
    samples: u64,
    fuel: u64,
    seed: u64,
) -> SampleReport {
    let mut rng = seeded_rng(seed);
    let tuples: Vec<Vec<u64>> = (0..samples)
        .map(|_| {
            (0..=i_max as usize)
                .map(|i| rng.random_range(1..=Advice::block_range(k, i)))
                .collect()
        })
        .collect();
    let failures = Executor::default()
        .map(tuples, |blocks| {
            let advice = Advice { k, blocks };
            fireworks_1gen(fam, &advice, fuel)
                .expect("tuples are in range")
                .result
                .is_err()
        })
        .into_iter()
        .filter(|f| *f)
        .count() as u64;
    SampleReport {
        k,
        i_max,
        samples,
        failures,
        seed,
        interval: wilson(failures, samples),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genericity::ColumnToken;
    use crate::names::FiniteGen;
    use crate::spaces::w;

    #[test]
    fn empty_family_all_succeed() {
        let report =
            advice_census(&CeOpenFamily::default(), 1, 0, 100, Executor::Sequential).unwrap();
        assert_eq!((report.successes, report.total), (4, 4));
    }

    #[test]
    fn single_failure_value() {
        let col = |s: &str| FiniteGen::constant(ColumnToken::Word(w(s)));
        let fam = CeOpenFamily::new(vec![col("1"), col("0")]);
        let report = advice_census(&fam, 1, 1, 1000, Executor::Parallel).unwrap();
        assert_eq!(report.failures(), 4);
        assert!(report.bound_holds && report.multiplicity_holds());
        assert_eq!(report.marginals[1].failing_values, BTreeMap::from([(1, 4)]));
        let sample = advice_sample(&fam, 1, 1, 200, 1000, 7);
        assert!(sample.interval.0 <= 0.125 && 0.125 <= sample.interval.1);
    }
}
