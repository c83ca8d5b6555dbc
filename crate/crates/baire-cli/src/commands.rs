//! One function per command: load, run, emit.

use std::path::Path;
use std::sync::Arc;

use baire::closed_sets::{
    boundary_superset, cluster_to_closure, cluster_to_negjump, negjump_to_cluster,
    negjump_to_sharp, pos_to_negjump, sharp_to_negjump, ClosedSet, ClosedSetFile, ClosedSetSpec,
    NegClosedSetJump, NegJumpSpec, Repr,
};
use baire::comeager::{
    growth_rounds, kucera_martingale, low_for_omega_family, noncomputable_family, witness_point,
    NextNonzero,
};
use baire::genericity::{
    advice_census, advice_sample, decides_every_column, fireworks_1gen, fireworks_tree, Advice,
};
use baire::instance::{InstanceFile, ParsedFamily, Payload};
use baire::names::{FiniteGen, Outcome};
use baire::par::Executor;
use baire::solvers::{
    baire_bct0_solve, bct0_solve, bct0_via_cantor, bct1_solve, bct2_solve, bct3_isolated,
    bct3_solve, cln_solve, dbct0_solve, jump_diagonalize, Bct0Instance, Bct1Instance,
};
use baire::spaces::{iota_embed, iota_inverse_exact, preimage_negative, BaireNegClosedSet, Word};
use serde_json::{json, Value};

use crate::output::{
    emit, instance, read_instance, take_trace, to_value, wrong_kind, Failure, Status,
};
use crate::Common;

fn family(inst: &InstanceFile) -> Result<ParsedFamily, Failure> {
    match &inst.payload {
        Payload::ClosedSetFamily(f) => Ok(ParsedFamily::parse(f)?),
        other => Err(wrong_kind(other, "closed_set_family")),
    }
}

fn closed_set(inst: &InstanceFile) -> Result<ClosedSetSpec, Failure> {
    match &inst.payload {
        Payload::ClosedSet(f) => Ok(f.parse()?),
        other => Err(wrong_kind(other, "closed_set")),
    }
}

fn status_of(done: bool) -> Status {
    if done {
        Status::Success
    } else {
        Status::Inconclusive
    }
}

pub fn bct0(c: &Common) -> Result<Status, Failure> {
    let inst = instance(c)?;
    let mut problem = Bct0Instance::new(family(&inst)?.negative()?);
    problem.nowhere_dense_certified = inst.certifications.nowhere_dense;
    match bct0_solve(&problem, c.fuel_or(1 << 16)) {
        Outcome::Value(solution) => {
            let mut body = to_value(&solution);
            let trace = take_trace(&mut body);
            body["point"] = to_value(&solution.point());
            emit(c, "bct0", Status::Success, body, &trace)
        }
        Outcome::Inconclusive => emit(
            c,
            "bct0",
            Status::Inconclusive,
            json!({ "reason": "fuel exhausted" }),
            &[],
        ),
    }
}

pub fn dbct0(c: &Common, count: u64) -> Result<Status, Failure> {
    let inst = instance(c)?;
    let mut problem = Bct0Instance::new(family(&inst)?.negative()?);
    problem.nowhere_dense_certified = inst.certifications.nowhere_dense;
    let mut answers = Vec::new();
    let mut trace = Vec::new();
    let mut done = true;
    for (n, outcome) in dbct0_solve(&problem, count, c.fuel_or(1 << 16))
        .into_iter()
        .enumerate()
    {
        match outcome {
            Outcome::Value(solution) => {
                let mut body = to_value(&solution);
                for mut event in take_trace(&mut body) {
                    event["answer"] = json!(n);
                    trace.push(event);
                }
                answers.push(body);
            }
            Outcome::Inconclusive => {
                done = false;
                answers.push(Value::Null);
            }
        }
    }
    emit(
        c,
        "dbct0",
        status_of(done),
        json!({ "answers": answers }),
        &trace,
    )
}

pub fn bct1(c: &Common, stages: u64, code_cap: u64) -> Result<Status, Failure> {
    let inst = instance(c)?;
    let mut problem = Bct1Instance::new(family(&inst)?.negative()?);
    problem.cover_certified = inst.certifications.cover;
    let run = bct1_solve(&problem, stages, code_cap);
    let mut body = to_value(&run);
    let trace = take_trace(&mut body);
    let guess = run.guesses.last().copied().flatten();
    body["guess"] = json!(guess);
    body["settled_from"] = json!(run.guesses.settled_from());
    body["mind_changes"] = json!(run.mind_changes());
    emit(c, "bct1", status_of(guess.is_some()), body, &trace)
}

pub fn bct2(c: &Common, stages: u64) -> Result<Status, Failure> {
    let inst = instance(c)?;
    let parsed = family(&inst)?;
    let n = parsed.sets.len();
    let run = match parsed.positive() {
        Ok(sets) => bct2_solve(&sets, stages),
        Err(_) => {
            let sets = parsed
                .sets
                .iter()
                .map(|s| match s {
                    ClosedSet::NegJump(j) => Ok(j.clone()),
                    other => Err(Failure::invalid(format!(
                        "bct2 takes pos or negjump sets, found {:?}",
                        other.repr()
                    ))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            jump_diagonalize(&sets, stages)
        }
    };
    let mut body = to_value(&run);
    let trace = take_trace(&mut body);
    body["final_prefix"] = to_value(&run.final_prefix());
    body["settled_from"] = json!(run.prefixes.settled_from());
    emit(c, "bct2", status_of(run.complete(n)), body, &trace)
}

pub fn bct3(c: &Common, stages: u64, code_cap: u64) -> Result<Status, Failure> {
    let inst = instance(c)?;
    if let Payload::Isolated(iso) = &inst.payload {
        let space = iso.space.build()?;
        return match bct3_isolated(&space, &iso.lists, iso.point, c.fuel_or(1 << 16)) {
            Outcome::Value(answer) => emit(c, "bct3", Status::Success, to_value(&answer), &[]),
            Outcome::Inconclusive => emit(
                c,
                "bct3",
                Status::Inconclusive,
                json!({ "reason": "fuel exhausted" }),
                &[],
            ),
        };
    }
    let sets = family(&inst)?.positive()?;
    let run = bct3_solve(&sets, stages, code_cap);
    let mut body = to_value(&run);
    let trace = take_trace(&mut body);
    let guess = run.guesses.last().copied().flatten();
    body["guess"] = json!(guess);
    body["settled_from"] = json!(run.guesses.settled_from());
    emit(c, "bct3", status_of(guess.is_some()), body, &trace)
}

pub fn cln(c: &Common, stages: u64) -> Result<Status, Failure> {
    let inst = instance(c)?;
    let Payload::Sequence(seq) = &inst.payload else {
        return Err(wrong_kind(&inst.payload, "sequence"));
    };
    let guesses = cln_solve(&seq.sequence, stages, c.fuel_or(1 << 10));
    let body = json!({
        "guess": guesses.last(),
        "settled_from": guesses.settled_from(),
        "guesses": guesses,
    });
    emit(c, "cln", status_of(guesses.last().is_some()), body, &[])
}

/// Samples columns `0..columns` over stages `0..stages` into a finite
/// double list that holds its last sampled value.
fn sample_negjump(set: &NegClosedSetJump, stages: u64, columns: u64) -> ClosedSetFile {
    let cols = (0..columns)
        .map(|col| {
            let head: Vec<_> = (0..stages).map(|s| set.entry(col, s)).collect();
            let last = set.entry(col, stages);
            FiniteGen::padded(head, last)
        })
        .collect();
    ClosedSetFile::from_spec(&ClosedSetSpec::NegJump(NegJumpSpec::new(cols)))
}

pub fn convert(
    c: &Common,
    from: &str,
    to: &str,
    stages: u64,
    columns: u64,
) -> Result<Status, Failure> {
    let inst = instance(c)?;
    let spec = closed_set(&inst)?;
    let from: Repr = from.parse()?;
    let to: Repr = to.parse()?;
    if spec.repr() != from {
        return Err(Failure::invalid(format!(
            "--from {from:?} does not match the instance's {:?}",
            spec.repr()
        )));
    }
    let source = spec.build();
    let converted = match (source.clone(), to) {
        (ClosedSet::Pos(s), Repr::Negjump) => ClosedSet::NegJump(pos_to_negjump(&s)),
        (ClosedSet::Cluster(s), Repr::Negjump) => ClosedSet::NegJump(cluster_to_negjump(&s)),
        (ClosedSet::Sharp(s), Repr::Negjump) => ClosedSet::NegJump(sharp_to_negjump(&s)),
        (ClosedSet::NegJump(s), Repr::Cluster) => ClosedSet::Cluster(negjump_to_cluster(&s)),
        (ClosedSet::NegJump(s), Repr::Sharp) => ClosedSet::Sharp(negjump_to_sharp(&s)),
        (ClosedSet::Cluster(s), Repr::Pos) => ClosedSet::Pos(cluster_to_closure(&s)),
        (_, to) => {
            return Err(Failure::invalid(format!(
                "no converter from {from:?} to {to:?}"
            )))
        }
    };
    let fuel = c.fuel_or(1 << 10);
    let mut body = json!({
        "from": from,
        "to": to,
        "depth": c.depth,
        "fuel": fuel,
        "source_truncation": source.depth_truncate(c.depth, fuel),
        "truncation": converted.depth_truncate(c.depth, fuel),
    });
    if let ClosedSet::NegJump(j) = &converted {
        body["sampled"] = to_value(&sample_negjump(j, stages, columns));
    }
    emit(c, "convert", Status::Success, body, &[])
}

pub fn boundary(c: &Common) -> Result<Status, Failure> {
    let inst = instance(c)?;
    let ClosedSet::Neg(set) = closed_set(&inst)?.build() else {
        return Err(Failure::invalid("boundary takes a neg closed set"));
    };
    let fuel = c.fuel_or(1 << 10);
    let superset = boundary_superset(&set);
    let body = json!({
        "depth": c.depth,
        "fuel": fuel,
        "set_truncation": set.depth_truncate(c.depth, fuel),
        "boundary_truncation": superset.depth_truncate(c.depth, fuel),
    });
    emit(c, "boundary", Status::Success, body, &[])
}

pub fn embed(c: &Common, rounds: u64) -> Result<Status, Failure> {
    let inst = instance(c)?;
    match &inst.payload {
        Payload::BairePoint(p) => {
            let image = iota_embed(&p.point)?;
            let back = iota_inverse_exact(&image).value();
            let body = json!({
                "image": image,
                "image_prefix": image.prefix(c.depth),
                "round_trip": back.is_some_and(|b| b.prefix(c.depth) == p.point.prefix(c.depth)),
            });
            emit(c, "embed", Status::Success, body, &[])
        }
        Payload::BaireFamily(f) => {
            let sets: Vec<BaireNegClosedSet> = f
                .sets
                .iter()
                .cloned()
                .map(BaireNegClosedSet::from_spec)
                .collect();
            let fuel = c.fuel_or(1 << 16);
            let direct = baire_bct0_solve(&sets, fuel);
            match bct0_via_cantor(&sets, rounds, fuel) {
                Outcome::Value(transfer) => {
                    let body = json!({ "transfer": transfer, "direct": direct });
                    emit(c, "embed", Status::Success, body, &[])
                }
                Outcome::Inconclusive => emit(
                    c,
                    "embed",
                    Status::Inconclusive,
                    json!({ "reason": "fuel exhausted", "direct": direct }),
                    &[],
                ),
            }
        }
        other => Err(wrong_kind(other, "baire_point or baire_family")),
    }
}

pub fn preimage(c: &Common) -> Result<Status, Failure> {
    let inst = instance(c)?;
    let Payload::MetricSet(m) = &inst.payload else {
        return Err(wrong_kind(&inst.payload, "metric_set"));
    };
    let set = preimage_negative(&m.set, m.space.build()?, m.bound);
    let fuel = c.fuel_or(1 << 10);
    let body = json!({
        "bound": m.bound,
        "depth": c.depth,
        "fuel": fuel,
        "truncation": set.depth_truncate(c.depth, fuel),
    });
    emit(c, "preimage", Status::Success, body, &[])
}

pub struct FireworksMode {
    k: u32,
    advice: Vec<u64>,
    census: bool,
    imax: u64,
    sample: Option<u64>,
    exec: Executor,
}

impl FireworksMode {
    pub fn new(
        k: u32,
        advice: Vec<u64>,
        census: bool,
        imax: u64,
        sample: Option<u64>,
        sequential: bool,
    ) -> Self {
        let exec = if sequential {
            Executor::Sequential
        } else {
            Executor::default()
        };
        FireworksMode {
            k,
            advice,
            census,
            imax,
            sample,
            exec,
        }
    }
}

pub fn fireworks(c: &Common, mode: FireworksMode) -> Result<Status, Failure> {
    let inst = instance(c)?;
    let Payload::OpenFamily(fam) = &inst.payload else {
        return Err(wrong_kind(&inst.payload, "open_family"));
    };
    let fuel = c.fuel_or(1 << 16);
    if let Some(samples) = mode.sample {
        let report = advice_sample(fam, mode.k, mode.imax, samples, fuel, c.seed);
        return emit(c, "fireworks", Status::Success, to_value(&report), &[]);
    }
    if mode.census {
        let mut report = advice_census(fam, mode.k, mode.imax, fuel, mode.exec)?;
        report.outcomes.retain(|o| !o.status.is_success());
        let mut body = to_value(&report);
        body["multiplicity_holds"] = json!(report.multiplicity_holds());
        return emit(c, "fireworks", Status::Success, body, &[]);
    }
    let advice = Advice::new(mode.k, mode.advice)?;
    let run = fireworks_1gen(fam, &advice, fuel)?;
    let mut body = to_value(&run);
    let trace = take_trace(&mut body);
    if let Some(p) = run.point() {
        body["decides_every_column"] = json!(decides_every_column(fam, &p));
    }
    emit(c, "fireworks", status_of(run.result.is_ok()), body, &trace)
}

pub fn tree(c: &Common, k: u32, m: u64) -> Result<Status, Failure> {
    let inst = instance(c)?;
    let Payload::OpenFamily(fam) = &inst.payload else {
        return Err(wrong_kind(&inst.payload, "open_family"));
    };
    let approx = fireworks_tree(fam, k, m, Executor::default());
    let mut body = to_value(&approx);
    body["kept_paths"] = json!(approx.kept_paths().to_string());
    emit(c, "tree", Status::Success, body, &[])
}

fn load_kind<T>(
    path: &Path,
    kind: &str,
    pick: impl FnOnce(Payload) -> Option<T>,
) -> Result<T, Failure> {
    let inst = read_instance(path)?;
    let found = inst.payload.kind();
    pick(inst.payload)
        .ok_or_else(|| Failure::invalid(format!("expected a {kind} instance, found {found}")))
}

pub fn noncomputable(c: &Common, table: &Path) -> Result<Status, Failure> {
    let table = load_kind(table, "program_table", |p| match p {
        Payload::ProgramTable(t) => Some(t),
        _ => None,
    })?;
    let fuel = c.fuel_or(64);
    let members: Vec<Value> = noncomputable_family(&table)
        .iter()
        .zip(&table.entries)
        .enumerate()
        .map(|(i, (set, entry))| {
            let truncation = set.depth_truncate(c.depth, fuel);
            let function = entry.function().map(|f| f.prefix(c.depth));
            json!({
                "index": i,
                "total": entry.is_total(),
                "function_prefix": function,
                "function_consistent": function.as_ref().map(|f| truncation.contains(f)),
                "truncation": truncation,
            })
        })
        .collect();
    emit(
        c,
        "comeager",
        Status::Success,
        json!({ "family": "noncomputable", "fuel": fuel, "members": members }),
        &[],
    )
}

pub fn low_omega(c: &Common, oracle: &Path, i: u64) -> Result<Status, Failure> {
    let oracle = Arc::new(load_kind(oracle, "left_ce_approx", |p| match p {
        Payload::LeftCeApprox(a) => Some(a),
        _ => None,
    })?);
    let fuel = c.fuel_or(1 << 14);
    let set = low_for_omega_family(&oracle, i);
    let body = json!({
        "family": "low_omega",
        "i": i,
        "depth": c.depth,
        "fuel": fuel,
        "block_lengths": (0..=c.depth as u64).map(|n| oracle.modulus(3 * n)).collect::<Vec<_>>(),
        "truncation": set.depth_truncate(c.depth, fuel),
    });
    emit(c, "comeager", Status::Success, body, &[])
}

pub fn martingale(
    c: &Common,
    oracle: &Path,
    point: Option<&Path>,
    sigma: Option<&str>,
    rounds: u64,
) -> Result<Status, Failure> {
    let oracle = Arc::new(load_kind(oracle, "left_ce_approx", |p| match p {
        Payload::LeftCeApprox(a) => Some(a),
        _ => None,
    })?);
    let point = match point {
        Some(path) => load_kind(path, "cantor_point", |p| match p {
            Payload::CantorPoint(f) => Some(f.point),
            _ => None,
        })?,
        None => witness_point(&oracle, rounds),
    };
    let f = NextNonzero::new(point.clone())?;
    let m = kucera_martingale(move |n| f.at(n), &oracle);
    let growth = growth_rounds(&m, &oracle, rounds);
    let mut body = json!({ "point": point, "growth": growth });
    let mut trace = Vec::new();
    if let Some(sigma) = sigma {
        let sigma: Word = sigma.parse()?;
        body["sigma"] = to_value(&sigma);
        body["capital"] = json!(m.evaluate(&sigma).to_string());
        trace = m.rounds(&sigma).iter().map(to_value).collect();
    }
    emit(c, "martingale", Status::Success, body, &trace)
}
