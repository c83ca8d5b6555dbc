//! Versioned instance files: a kind tag, its payload and optional
//! certifications that are replayed on load.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::closed_sets::{ClosedSet, ClosedSetFile, ClosedSetSpec, NegClosedSet, PosClosedSet};
use crate::comeager::{LeftCEApprox, ProgramTable};
use crate::error::{Error, Result};
use crate::genericity::CeOpenFamily;
use crate::names::FiniteGen;
use crate::solvers::{certify_cover, certify_nowhere_dense, IsolatedPoint, MetricPointToken};
use crate::spaces::{BairePoint, BaireStreamSpec, CantorPoint, MetricNegSet, SpaceFile};

pub const SCHEMA_VERSION: u32 = 1;

/// Removal fuel for certification replays when none is declared.
pub const DEFAULT_CERTIFY_FUEL: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedSetFamily {
    pub sets: Vec<ClosedSetFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsolatedInstance {
    pub space: SpaceFile,
    pub lists: Vec<FiniteGen<MetricPointToken>>,
    pub point: IsolatedPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSetInstance {
    pub space: SpaceFile,
    pub set: MetricNegSet,
    /// Largest Baire symbol used when pulling back.
    pub bound: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaireFamily {
    pub sets: Vec<BaireStreamSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sequence {
    pub sequence: FiniteGen<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CantorPointFile {
    pub point: CantorPoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BairePointFile {
    pub point: BairePoint,
}

/// Instance payload keyed by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum Payload {
    ClosedSet(ClosedSetFile),
    ClosedSetFamily(ClosedSetFamily),
    Isolated(IsolatedInstance),
    MetricSet(MetricSetInstance),
    BaireFamily(BaireFamily),
    BairePoint(BairePointFile),
    CantorPoint(CantorPointFile),
    Sequence(Sequence),
    OpenFamily(CeOpenFamily),
    ProgramTable(ProgramTable),
    LeftCeApprox(LeftCEApprox),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::ClosedSet(_) => "closed_set",
            Payload::ClosedSetFamily(_) => "closed_set_family",
            Payload::Isolated(_) => "isolated",
            Payload::MetricSet(_) => "metric_set",
            Payload::BaireFamily(_) => "baire_family",
            Payload::BairePoint(_) => "baire_point",
            Payload::CantorPoint(_) => "cantor_point",
            Payload::Sequence(_) => "sequence",
            Payload::OpenFamily(_) => "open_family",
            Payload::ProgramTable(_) => "program_table",
            Payload::LeftCeApprox(_) => "left_ce_approx",
        }
    }
}

/// Properties claimed by the instance author, each with its spot-check depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Certifications {
    /// Every set of a negative family is nowhere dense.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nowhere_dense: Option<usize>,
    /// The sets of a negative family cover the space.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fuel: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub schema_version: u32,
    #[serde(flatten)]
    pub payload: Payload,
    #[serde(default)]
    pub certifications: Certifications,
}

/// A family parsed from its files.
#[derive(Clone)]
pub struct ParsedFamily {
    pub specs: Vec<ClosedSetSpec>,
    pub sets: Vec<ClosedSet>,
}

impl ParsedFamily {
    pub fn parse(family: &ClosedSetFamily) -> Result<Self> {
        let specs = family
            .sets
            .iter()
            .map(ClosedSetFile::parse)
            .collect::<Result<Vec<_>>>()?;
        let sets = specs.iter().map(ClosedSetSpec::build).collect();
        Ok(ParsedFamily { specs, sets })
    }

    /// The sets, all of which must be negatively given.
    pub fn negative(&self) -> Result<Vec<NegClosedSet>> {
        self.sets
            .iter()
            .enumerate()
            .map(|(i, s)| match s {
                ClosedSet::Neg(n) => Ok(n.clone()),
                other => Err(Error::InvalidInstance(format!(
                    "set {i} is {:?}, expected neg",
                    other.repr()
                ))),
            })
            .collect()
    }

    /// The sets, all of which must be positively given.
    pub fn positive(&self) -> Result<Vec<PosClosedSet>> {
        self.sets
            .iter()
            .enumerate()
            .map(|(i, s)| match s {
                ClosedSet::Pos(p) => Ok(p.clone()),
                other => Err(Error::InvalidInstance(format!(
                    "set {i} is {:?}, expected pos",
                    other.repr()
                ))),
            })
            .collect()
    }
}

impl InstanceFile {
    pub fn new(payload: Payload) -> Self {
        InstanceFile {
            schema_version: SCHEMA_VERSION,
            payload,
            certifications: Certifications::default(),
        }
    }

    pub fn with_certifications(mut self, certifications: Certifications) -> Self {
        self.certifications = certifications;
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        file.validate()?;
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInstance(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instances serialize")
    }

    /// Checks the schema version, parses nested payloads (replaying declared
    /// stabilization stages) and replays the certifications.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidInstance(format!(
                "schema version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        match &self.payload {
            Payload::ClosedSet(file) => {
                file.parse()?;
            }
            Payload::ClosedSetFamily(family) => {
                let parsed = ParsedFamily::parse(family)?;
                let fuel = self.certifications.fuel.unwrap_or(DEFAULT_CERTIFY_FUEL);
                if let Some(depth) = self.certifications.nowhere_dense {
                    let sets = parsed.negative()?;
                    if let Some(i) = sets
                        .iter()
                        .position(|s| !certify_nowhere_dense(s, depth, fuel))
                    {
                        return Err(Error::CertificationFailed(format!(
                            "set {i} is not nowhere dense at depth {depth}"
                        )));
                    }
                }
                if let Some(depth) = self.certifications.cover {
                    if !certify_cover(&parsed.negative()?, depth, fuel) {
                        return Err(Error::CertificationFailed(format!(
                            "the sets do not cover at depth {depth}"
                        )));
                    }
                }
            }
            Payload::Isolated(inst) => {
                inst.space.build()?;
            }
            Payload::MetricSet(inst) => {
                inst.space.build()?;
            }
            _ => {}
        }
        if !matches!(self.payload, Payload::ClosedSetFamily(_))
            && (self.certifications.nowhere_dense.is_some() || self.certifications.cover.is_some())
        {
            return Err(Error::InvalidInstance(format!(
                "{} instances carry no certifications",
                self.payload.kind()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_sets::WordStreamSpec;
    use crate::spaces::{w, Token};

    fn neg(spec: WordStreamSpec) -> ClosedSetFile {
        ClosedSetFile::from_spec(&ClosedSetSpec::Neg(spec))
    }

    #[test]
    fn round_trip_and_certification() {
        let zero = CantorPoint::padded(&w(""), 0);
        let family = ClosedSetFamily {
            sets: vec![neg(WordStreamSpec::outside(vec![], vec![zero], vec![]))],
        };
        let file = InstanceFile::new(Payload::ClosedSetFamily(family.clone())).with_certifications(
            Certifications {
                nowhere_dense: Some(6),
                ..Default::default()
            },
        );
        let back = InstanceFile::from_json(&file.to_json()).unwrap();
        assert_eq!(back, file);

        let half = ClosedSetFamily {
            sets: vec![neg(WordStreamSpec::outside(vec![], vec![], vec![w("0")]))],
        };
        let bad =
            InstanceFile::new(Payload::ClosedSetFamily(half)).with_certifications(Certifications {
                nowhere_dense: Some(6),
                ..Default::default()
            });
        assert!(matches!(
            InstanceFile::from_json(&bad.to_json()),
            Err(Error::CertificationFailed(_))
        ));
    }

    #[test]
    fn rejects_other_versions() {
        let mut file = InstanceFile::new(Payload::ClosedSet(neg(WordStreamSpec::constant(
            Token::NoBall,
        ))));
        file.schema_version = 2;
        assert!(InstanceFile::from_json(&file.to_json()).is_err());
    }
}
