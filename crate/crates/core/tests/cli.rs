use std::process::Command;

use jsonschema::JSONSchema;
use malle_core::report::SCHEMA;
use serde_json::Value;

fn malle(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_malle")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn schema() -> JSONSchema {
    let value: Value = serde_json::from_str(SCHEMA).unwrap();
    JSONSchema::compile(&value).expect("schema compiles")
}

fn assert_valid(stdout: &str) -> Value {
    let doc: Value = serde_json::from_str(stdout).unwrap();
    let schema = schema();
    if let Err(errors) = schema.validate(&doc) {
        let msgs: Vec<String> = errors.map(|e| format!("{e} at {}", e.instance_path)).collect();
        panic!("schema violations: {msgs:#?}\n{stdout}");
    }
    doc
}

#[test]
fn golden_text_outputs() {
    let cases: &[(&[&str], &str, i32)] = &[
        (&["invariants", "c2-wr-c4", "--no-timing"], "invariants_c2_wr_c4.txt", 0),
        (&["check", "wr(C(2),D4) with M = center", "--no-timing"], "check_c2_wr_d4.txt", 0),
        (&["conjecture", "v4-toy", "--no-timing"], "conjecture_v4_toy.txt", 0),
        (&["conjecture", "c2-wr-v4", "--no-timing"], "conjecture_c2_wr_v4.txt", 3),
        (
            &["count", "v4-fixed", "--d1", "5", "--X", "1e4", "--from", "100", "--per-decade", "2", "--format", "csv"],
            "count_v4_d1_5.csv",
            0,
        ),
        (&["scan", "--maxA", "3", "--B", "C2,C3", "--no-timing"], "scan_small.txt", 0),
        (&["presets"], "presets.txt", 0),
    ];
    for (args, file, code) in cases {
        let (c, out, err) = malle(args);
        assert_eq!(c, *code, "{args:?}: {err}");
        assert_eq!(out, golden(file), "{args:?}");
    }
}

#[test]
fn preset_flags_through_the_binary() {
    let (c, out, _) = malle(&["--json", "check", "wr(C(2),C(9)) with M = C(3)@3", "--no-timing"]);
    assert_eq!(c, 0);
    let doc = assert_valid(&out);
    assert_eq!(doc["verdicts"]["flags"]["thm_1_7"]["status"], "applies");
    assert_eq!(doc["verdicts"]["flags"]["thm_1_6"]["reason"], "nilpotency");
    assert_eq!(doc["invariants"]["a_TmodN"], 6);
    assert_eq!(doc["invariants"]["rank_r"], 1);
    assert!(doc["B_value"].is_null());
}

#[test]
fn every_document_kind_validates() {
    let runs: &[&[&str]] = &[
        &["--json", "invariants", "c2-wr-d4"],
        &["--json", "invariants", "v4-toy", "--no-timing"],
        &["--json", "check", "c2-wr-c4"],
        &["--json", "scan", "--maxA", "4", "--B", "C2,C4,D4,C9"],
        &["--json", "conjecture", "c2-wr-v4"],
        &["--json", "conjecture", "c2-wr-c4", "--max-subgroups", "1"],
        &["--json", "count", "quadratic", "--X", "1e5", "--fit"],
        &["count", "v4-fixed", "--d1", "-4", "--X", "1e5", "--format", "json"],
        &["--json", "presets"],
    ];
    for args in runs {
        let (_, out, err) = malle(args);
        assert!(!out.is_empty(), "{args:?}: {err}");
        assert_valid(&out);
    }
}

#[test]
fn outputs_are_byte_identical_without_timing() {
    for args in [
        &["--json", "scan", "--maxA", "4", "--no-timing"][..],
        &["--json", "invariants", "c2-wr-c9", "--no-timing"][..],
        &["--json", "count", "quadratic", "--X", "1e6", "--fit", "--no-timing"][..],
    ] {
        let first = malle(args);
        let second = malle(args);
        assert_eq!(first, second, "{args:?}");
    }
    let (_, out, _) = malle(&["--json", "presets", "--no-timing"]);
    assert!(!out.contains("elapsed_ms"));
    let (_, out, _) = malle(&["--json", "scan", "--maxA", "2", "--B", "C2"]);
    assert!(out.contains("elapsed_ms"));
}

#[test]
fn exit_codes() {
    // usage and parse errors
    assert_eq!(malle(&[]).0, 1);
    assert_eq!(malle(&["bogus"]).0, 1);
    let (c, _, err) = malle(&["invariants", "wr(C(2),Q8)"]);
    assert_eq!(c, 1);
    assert!(err.contains("at 8"), "{err}");
    assert_eq!(malle(&["check", "v4-toy"]).0, 1);
    assert_eq!(malle(&["count", "v4-fixed", "--X", "1000"]).0, 1);
    assert_eq!(malle(&["count", "v4-fixed", "--X", "1000", "--d1", "3"]).0, 1);
    assert_eq!(malle(&["scan", "--maxA", "17"]).0, 1);
    assert_eq!(malle(&["scan", "--B", "C(17)"]).0, 1);
    // caps
    assert_eq!(malle(&["count", "quadratic", "--X", "2e10"]).0, 2);
    assert_eq!(malle(&["conjecture", "c2-wr-c4", "--max-subgroups", "1"]).0, 2);
    assert_eq!(malle(&["invariants", "wr(C(4),C(9))"]).0, 2);
    assert_eq!(malle(&["scan", "--maxA", "4", "--B", "C9", "--max-order", "10"]).0, 2);
    // witness
    assert_eq!(malle(&["conjecture", "c2-wr-v4"]).0, 3);
    // ok
    assert_eq!(malle(&["scan", "--B", ""]).0, 0);
    assert_eq!(malle(&["--help"]).0, 0);
}

#[test]
fn count_boundaries() {
    let (c, out, _) = malle(&["count", "v4-fixed", "--d1", "5", "--X", "225", "--from", "224", "--format", "csv"]);
    assert_eq!(c, 0);
    assert_eq!(out, "X,count\n224,0\n225,1\n");
    let (_, out, _) = malle(&["count", "quadratic", "--X", "3", "--from", "3", "--format", "csv"]);
    assert_eq!(out, "X,count\n3,1\n");
}
