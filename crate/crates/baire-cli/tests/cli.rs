use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn instance(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../instances")
        .join(name)
}

fn baire(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_baire"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

#[test]
fn bct0_succeeds_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let result = dir.path().join("bct0.json");
    let inst = instance("bct0_points.json");
    let out = baire(&["bct0", "--instance", path(&inst), "--out", path(&result)]);
    assert_eq!(out.status.code(), Some(0));
    let verified = baire(&[
        "verify",
        "--instance",
        path(&inst),
        "--result",
        path(&result),
    ]);
    assert_eq!(
        verified.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&verified.stderr)
    );
    assert_eq!(json(&verified)["result"]["verified"], "bct0");
}

#[test]
fn tampered_result_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let result = dir.path().join("bct0.json");
    let inst = instance("bct0_points.json");
    assert_eq!(
        baire(&["bct0", "--instance", path(&inst), "--out", path(&result)])
            .status
            .code(),
        Some(0)
    );
    let mut envelope: Value =
        serde_json::from_str(&std::fs::read_to_string(&result).unwrap()).unwrap();
    envelope["result"]["witnesses"][0]["enumeration_position"] = Value::from(0);
    std::fs::write(&result, envelope.to_string()).unwrap();
    let verified = baire(&[
        "verify",
        "--instance",
        path(&inst),
        "--result",
        path(&result),
    ]);
    assert_eq!(verified.status.code(), Some(1));
    let diagnostic: Value = serde_json::from_slice(&verified.stderr).unwrap();
    assert_eq!(diagnostic["error"], "verification_failed");
}

#[test]
fn exhausted_budget_exits_with_two() {
    let inst = instance("bct1_cover.json");
    let out = baire(&[
        "bct1",
        "--instance",
        path(&inst),
        "--stages",
        "4",
        "--code-cap",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["status"], "inconclusive");
}

#[test]
fn invalid_input_exits_with_one() {
    let out = baire(&["bct0", "--instance", "/nonexistent/instance.json"]);
    assert_eq!(out.status.code(), Some(1));
    let diagnostic: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(diagnostic["error"], "invalid_input");

    let wrong_kind = baire(&["bct0", "--instance", path(&instance("toy_omega.json"))]);
    assert_eq!(wrong_kind.status.code(), Some(1));
}

#[test]
fn runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<(Vec<u8>, Vec<u8>)> = (0..2)
        .map(|i| {
            let trace = dir.path().join(format!("trace{i}.jsonl"));
            let inst = instance("bct2_points.json");
            let out = baire(&["bct2", "--instance", path(&inst), "--trace", path(&trace)]);
            assert_eq!(out.status.code(), Some(0));
            (out.stdout, std::fs::read(&trace).unwrap())
        })
        .collect();
    assert_eq!(runs[0], runs[1]);

    let census = |seq: bool| {
        let inst = instance("fireworks/long_words.json");
        let mut args = vec![
            "fireworks",
            "--instance",
            path(&inst),
            "--census",
            "--k",
            "2",
            "--imax",
            "1",
        ];
        if seq {
            args.push("--sequential");
        }
        baire(&args).stdout
    };
    assert_eq!(census(false), census(true));
}

#[test]
fn pos_to_negjump_preserves_the_truncation() {
    let inst = instance("pos_set.json");
    let out = baire(&[
        "convert",
        "--instance",
        path(&inst),
        "--from",
        "pos",
        "--to",
        "negjump",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body = &json(&out)["result"];
    assert_eq!(body["to"], "negjump");
    assert!(!body["truncation"].as_array().unwrap().is_empty());
    assert_eq!(body["truncation"], body["source_truncation"]);
}

#[test]
fn fireworks_census_meets_the_quarter_bound() {
    for family in [
        "complementary_balls.json",
        "long_words.json",
        "single_ball.json",
    ] {
        let inst = instance(&format!("fireworks/{family}"));
        let out = baire(&[
            "fireworks",
            "--instance",
            path(&inst),
            "--census",
            "--k",
            "2",
            "--imax",
            "1",
        ]);
        assert_eq!(out.status.code(), Some(0));
        let body = &json(&out)["result"];
        let (failures, total) = body["failure_fraction"]
            .as_str()
            .unwrap()
            .split_once('/')
            .unwrap();
        let (failures, total): (u64, u64) = (failures.parse().unwrap(), total.parse().unwrap());
        assert_eq!(total, 128);
        assert!(4 * failures <= total, "{family}: {failures}/{total}");
        assert_eq!(body["multiplicity_holds"], true);
    }
}

#[test]
fn martingale_reports_growth() {
    let oracle = instance("toy_omega.json");
    let point = instance("witness_point.json");
    let out = baire(&[
        "martingale",
        "--oracle",
        path(&oracle),
        "--point",
        path(&point),
        "--rounds",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let growth = json(&out)["result"]["growth"].as_array().unwrap().clone();
    assert_eq!(growth.len(), 8);
    assert!(growth.iter().all(|r| r["holds"] == true));
}
