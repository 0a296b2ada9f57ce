//! End-to-end checks of the installed binary: exit codes, report formats,
//! and the family -> analyze round trip.

use std::process::{Command, Output};

fn signbase(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_signbase"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_temp(name: &str, contents: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("signbase-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

const EXAMPLE: &str = "2\n1 1 +\n1 2 +\n2 1 -\n";

#[test]
fn analyze_reports_and_exits_zero() {
    let path = write_temp("example.dg", EXAMPLE);
    let out = signbase(&["analyze", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["schema"], "signbase/1");
    assert_eq!(json["primitive"], true);
    assert_eq!(json["nonpowerful"], true);
    assert_eq!(json["bases"]["global"], 4);
    assert_eq!(json["bases"]["stabilization_time"], 4);
    std::fs::remove_file(path).ok();
}

#[test]
fn analyze_exit_code_2_on_non_primitive() {
    let path = write_temp("fourcycle.dg", "4\n1 2 +\n2 3 +\n3 4 +\n4 1 +\n");
    let out = signbase(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("gcd of cycle lengths = 4"), "{stderr}");
    std::fs::remove_file(path).ok();
}

#[test]
fn analyze_exit_code_3_on_powerful_and_exp_only_escape() {
    let path = write_temp("powerful.dg", "2\n1 1 +\n1 2 +\n2 1 +\n");
    let out = signbase(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let out = signbase(&["analyze", path.to_str().unwrap(), "--exp-only", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["nonpowerful"], false);
    assert!(json.get("bases").is_none());
    std::fs::remove_file(path).ok();
}

#[test]
fn analyze_exit_code_1_on_parse_error() {
    let path = write_temp("broken.dg", "2\n1 2 *\n");
    let out = signbase(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    std::fs::remove_file(path).ok();
}

#[test]
fn family_preset_matches_published_value() {
    let out = signbase(&[
        "family", "--name", "dki", "--n", "7", "--k", "2", "--i", "1", "--preset", "same-sign",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["report"]["bases"]["global"], 67);

    // q1 at n=8: l(k) = 2n^2 - 8n + 4 + k
    let out = signbase(&["family", "--name", "b1", "--n", "8", "--preset", "q1", "--json"]);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let ordered: Vec<u64> = json["report"]["bases"]["ordered"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    let expected: Vec<u64> = (1..=8).map(|k| 128 - 64 + 4 + k).collect();
    assert_eq!(ordered, expected);
}

#[test]
fn family_parameter_errors_name_the_rule() {
    let out = signbase(&["family", "--name", "script-l", "--n", "8"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd n >= 7"));
}

#[test]
fn powerful_family_report_degrades_to_exponents() {
    // all-positive d1 at n=6 is powerful: exp(S) = n^2 - 2n + 2 = 26, no base
    let out = signbase(&["family", "--name", "d1", "--n", "6", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["report"]["nonpowerful"], false);
    assert_eq!(json["report"]["exponents"]["global"], 26);
    assert!(json["report"].get("bases").is_none());
}

#[test]
fn family_edge_list_round_trips_through_analyze() {
    let out = signbase(&[
        "family", "--name", "d1", "--n", "6", "--preset", "same-sign", "--no-analyze",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let edge_list = String::from_utf8(out.stdout).unwrap();
    let path = write_temp("roundtrip.dg", &edge_list);
    let analyzed = signbase(&["analyze", path.to_str().unwrap(), "--json"]);
    assert_eq!(analyzed.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&analyzed.stdout).unwrap();
    // signed D1 at n=6: l(k) = 2n^2 - 4n + k + 2 = 50 + k
    assert_eq!(json["bases"]["global"], 56);
    std::fs::remove_file(path).ok();
}

#[test]
fn verify_suite_runs_clean_and_deterministically() {
    let args = [
        "verify", "--suite", "tiny", "--samples", "25", "--seed", "9", "--json",
    ];
    let a = signbase(&args);
    let b = signbase(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let json: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(json["failed"], 0);
}

#[test]
fn verify_rejects_unknown_suite() {
    let out = signbase(&["verify", "--suite", "nope"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite"));
}
