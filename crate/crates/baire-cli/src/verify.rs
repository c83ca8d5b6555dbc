//! Checks a result file against the instance it was computed from.

use std::path::Path;

use baire::closed_sets::{ClosedSet, NegClosedSet, PosClosedSet};
use baire::genericity::{decides_every_column, FireworksRun};
use baire::instance::{InstanceFile, ParsedFamily, Payload};
use baire::solvers::{Bct0Solution, Bct1Run, Bct3Run, JumpRun};
use baire::spaces::{Token, Word};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::output::{emit, instance, Envelope, Failure, Status};
use crate::Common;

fn parse<T: DeserializeOwned>(value: &Value) -> Result<T, Failure> {
    serde_json::from_value(value.clone())
        .map_err(|e| Failure::invalid(format!("malformed result: {e}")))
}

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), Failure> {
    if ok {
        Ok(())
    } else {
        Err(Failure::rejected(message()))
    }
}

fn family(inst: &InstanceFile) -> Result<ParsedFamily, Failure> {
    match &inst.payload {
        Payload::ClosedSetFamily(f) => Ok(ParsedFamily::parse(f)?),
        other => Err(Failure::invalid(format!(
            "expected a closed_set_family instance, found {}",
            other.kind()
        ))),
    }
}

/// Every set has a replayable witness containing the point, and the point's
/// depth prefix is excluded by each set.
fn check_bct0(
    sets: &[NegClosedSet],
    solution: &Bct0Solution,
    depth: usize,
    fuel: u64,
) -> Result<usize, Failure> {
    for (i, set) in sets.iter().enumerate() {
        let w = solution
            .witnesses
            .iter()
            .find(|w| w.set_index == i as u64)
            .ok_or_else(|| Failure::rejected(format!("set {i} has no witness")))?;
        ensure(
            set.token(w.enumeration_position) == Token::Word(w.ball.clone()),
            || {
                format!(
                    "set {i} does not remove {} at position {}",
                    w.ball, w.enumeration_position
                )
            },
        )?;
        ensure(w.ball.is_prefix_of(&solution.prefix), || {
            format!("witness {} of set {i} misses the point", w.ball)
        })?;
        let d = depth.max(w.ball.len());
        ensure(
            !set.depth_truncate(d, fuel)
                .contains(&solution.point().prefix(d)),
            || format!("the point meets set {i} at depth {d}"),
        )?;
    }
    Ok(sets.len())
}

/// All depth-`depth` extensions of `word` are consistent with the set.
fn interior(truncation: &std::collections::BTreeSet<Word>, word: &Word, depth: usize) -> bool {
    let depth = depth.max(word.len());
    Word::all_of_length(depth - word.len()).all(|x| truncation.contains(&word.concat(&x)))
}

fn positive_avoidance(set: &PosClosedSet, ball: &Word, fuel: u64) -> bool {
    set.points(fuel).iter().all(|p| !p.extends(ball))
}

pub fn verify(c: &Common, result: &Path) -> Result<Status, Failure> {
    let inst = instance(c)?;
    let text = std::fs::read_to_string(result)?;
    let envelope: Envelope = serde_json::from_str(&text)
        .map_err(|e| Failure::invalid(format!("malformed result file: {e}")))?;
    if envelope.status != Status::Success {
        return Err(Failure::invalid("only successful results can be verified"));
    }
    let fuel = c.fuel_or(1 << 12);
    let checks = match envelope.command.as_str() {
        "bct0" => check_bct0(
            &family(&inst)?.negative()?,
            &parse(&envelope.result)?,
            c.depth,
            fuel,
        )?,
        "dbct0" => {
            let sets = family(&inst)?.negative()?;
            let answers: Vec<Bct0Solution> = parse(&envelope.result["answers"])?;
            let mut checks = 0;
            for a in &answers {
                checks += check_bct0(&sets, a, c.depth, fuel)?;
            }
            checks
        }
        "bct1" => {
            let sets = family(&inst)?.negative()?;
            let run: Bct1Run = parse(&envelope.result)?;
            let (i, word) = run.leader.ok_or_else(|| Failure::rejected("no leader"))?;
            let set = sets
                .get(i as usize)
                .ok_or_else(|| Failure::rejected(format!("leader set {i} out of range")))?;
            let truncation = set.depth_truncate(c.depth.max(word.len()), fuel);
            ensure(interior(&truncation, &word, c.depth), || {
                format!("{word} is not interior to set {i}")
            })?;
            1
        }
        "bct2" => {
            let parsed = family(&inst)?;
            let run: JumpRun = parse(&envelope.result)?;
            let prefix = run.final_prefix();
            ensure(run.complete(parsed.sets.len()), || {
                "some set has no witness".into()
            })?;
            for w in &run.witnesses {
                ensure(w.ball.is_prefix_of(&prefix), || {
                    format!("witness {} misses the prefix", w.ball)
                })?;
                let avoided = match &parsed.sets[w.set_index as usize] {
                    ClosedSet::Pos(set) => positive_avoidance(set, &w.ball, fuel),
                    ClosedSet::NegJump(set) => {
                        set.entry(w.column, fuel) == Token::Word(w.ball.clone())
                    }
                    _ => false,
                };
                ensure(avoided, || {
                    format!("witness {} does not leave set {}", w.ball, w.set_index)
                })?;
            }
            run.witnesses.len()
        }
        "bct3" => {
            let sets = family(&inst)?.positive()?;
            let run: Bct3Run = parse(&envelope.result)?;
            let (i, word) = run.leader.ok_or_else(|| Failure::rejected("no leader"))?;
            let set = sets
                .get(i as usize)
                .ok_or_else(|| Failure::rejected(format!("leader set {i} out of range")))?;
            let truncation = set.depth_truncate(c.depth.max(word.len()), fuel);
            ensure(interior(&truncation, &word, c.depth), || {
                format!("{word} is not interior to set {i}")
            })?;
            1
        }
        "fireworks" => {
            let Payload::OpenFamily(fam) = &inst.payload else {
                return Err(Failure::invalid("expected an open_family instance"));
            };
            let run: FireworksRun = parse(&envelope.result)?;
            let point = run
                .point()
                .ok_or_else(|| Failure::invalid("census and sample reports are not verifiable"))?;
            ensure(decides_every_column(fam, &point), || {
                "the point leaves some column undecided".into()
            })?;
            fam.len()
        }
        other => {
            return Err(Failure::invalid(format!(
                "results of {other:?} are not verifiable"
            )))
        }
    };
    emit(
        c,
        "verify",
        Status::Success,
        json!({ "verified": envelope.command, "checks": checks }),
        &[],
    )
}
