// SPDX-License-Identifier: Apache-2.0
//! End-to-end tests of the binary: exit-code contract, output formats,
//! and the byte-stable golden report.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_proxyscope"))
        .current_dir(workspace_root())
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

// --- analyze ---------------------------------------------------------------

#[test]
fn analyze_single_proxy_exits_zero_with_findings() {
    let out = bin(&["analyze", "fixtures/corpus/fig5_admin_upgradeable.sol"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_of(&out);
    assert!(text.contains("UpgradeableRelay"));
    assert!(text.contains("upgradeable: yes"), "text output:\n{text}");
    assert!(text.contains("SETTER_FOUND"));
}

#[test]
fn analyze_missing_path_is_usage_error() {
    let out = bin(&["analyze", "fixtures/does_not_exist.sol"]);
    assert_eq!(code(&out), 2);
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn analyze_unparseable_file_exits_one() {
    let out = bin(&["analyze", "fixtures/corpus/broken.sol"]);
    assert_eq!(code(&out), 1, "error records make analyze exit 1");
    assert!(stdout_of(&out).contains("syntax error"));
}

#[test]
fn analyze_address_argument_is_rejected() {
    let out = bin(&[
        "analyze",
        "0x1234567890abcdef1234567890abcdef12345678",
    ]);
    assert_eq!(code(&out), 2, "analyze takes files, corpus takes addresses");
}

#[test]
fn analyze_json_is_well_formed_and_machine_readable() {
    let out = bin(&["analyze", "fixtures/corpus/eip1967_transparent.sol", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid JSON");
    let records = doc["records"].as_array().expect("records array");
    let rec = records
        .iter()
        .find(|r| r["contract"] == "TransparentUpgradeableProxy")
        .expect("record present");
    assert_eq!(rec["is_proxy"], true);
    assert_eq!(rec["upgradeable"], true);
    let labels: Vec<&str> =
        rec["labels"].as_array().unwrap().iter().map(|l| l.as_str().unwrap()).collect();
    assert_eq!(labels, ["EIP1967_UNSTRUCTURED", "TRANSPARENT_ADMIN"]);
}

// --- diff-storage ----------------------------------------------------------

#[test]
fn diff_storage_append_is_compatible() {
    let out = bin(&[
        "diff-storage",
        "fixtures/layout/token_v1.sol",
        "fixtures/layout/token_v2_append.sol",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout_of(&out).contains("APPEND_ONLY_COMPATIBLE"));
}

#[test]
fn diff_storage_reorder_is_incompatible_exit_one() {
    let out = bin(&[
        "diff-storage",
        "fixtures/layout/token_v1.sol",
        "fixtures/layout/token_v2_reorder.sol",
    ]);
    assert_eq!(code(&out), 1);
    let text = stdout_of(&out);
    assert!(text.contains("INCOMPATIBLE"));
    assert!(text.contains("REORDERED"));
}

#[test]
fn diff_storage_unknown_contract_is_usage_error() {
    let out = bin(&[
        "diff-storage",
        "fixtures/layout/token_v1.sol",
        "fixtures/layout/token_v2_append.sol",
        "--old-contract",
        "NoSuchThing",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn diff_storage_json_carries_both_layouts() {
    let out = bin(&[
        "diff-storage",
        "fixtures/layout/token_v1.sol",
        "fixtures/layout/token_v2_append.sol",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["report"]["status"], "APPEND_ONLY_COMPATIBLE");
    let old_entries = doc["old_layout"]["entries"].as_array().unwrap();
    let new_entries = doc["new_layout"]["entries"].as_array().unwrap();
    assert!(old_entries.len() < new_entries.len(), "append adds entries");
}

// --- selectors ---------------------------------------------------------------

#[test]
fn selectors_collision_exits_one() {
    let out = bin(&[
        "selectors",
        "fixtures/clash/gateway.sol",
        "fixtures/clash/burnable_token.sol",
    ]);
    assert_eq!(code(&out), 1);
    let text = stdout_of(&out);
    assert!(text.contains("0x42966c68"), "the collision selector is named:\n{text}");
    assert!(text.contains("COLLISION"));
}

#[test]
fn selectors_shadowing_alone_exits_zero() {
    let out = bin(&[
        "selectors",
        "fixtures/clash/gateway.sol",
        "fixtures/clash/shadow_token.sol",
    ]);
    assert_eq!(code(&out), 0, "shadowing is reported but is not a collision");
    assert!(stdout_of(&out).contains("SHADOW"));
}

// --- corpus ------------------------------------------------------------------

#[test]
fn corpus_run_with_error_records_still_exits_zero() {
    let out = bin(&["corpus", "run", "fixtures/corpus"]);
    assert_eq!(code(&out), 0, "error records are data, not process failure");
    let text = stdout_of(&out);
    assert!(text.contains("1 errors") || text.contains("errors: 1"), "output:\n{text}");
}

#[test]
fn corpus_run_compare_baseline_requires_labels() {
    let out = bin(&["corpus", "run", "fixtures/corpus", "--compare-baseline"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn corpus_run_json_matches_golden_bytes() {
    let out = bin(&[
        "corpus",
        "run",
        "fixtures/corpus",
        "--labels",
        "fixtures/corpus/truth.csv",
        "--compare-baseline",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let golden =
        std::fs::read(workspace_root().join("fixtures/golden/corpus_report.json")).unwrap();
    assert_eq!(out.stdout, golden);
}

#[test]
fn corpus_run_report_round_trips_and_is_sorted() {
    let out = bin(&["corpus", "run", "fixtures/corpus", "--format", "json"]);
    let text = stdout_of(&out);
    let report = proxyscope::corpus::BatchReport::from_json(&text).expect("round-trips");
    let keys: Vec<(String, String)> = report
        .records
        .iter()
        .map(|r| (r.key.clone(), r.contract.clone()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted, "records sorted by (key, contract)");
    assert_eq!(report.totals.contracts, 29);
    assert_eq!(report.totals.errors, 1);
}

#[test]
fn corpus_compare_scores_an_existing_report() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("report.json");
    let out = bin(&["corpus", "run", "fixtures/corpus", "--format", "json"]);
    std::fs::write(&report_path, &out.stdout).unwrap();

    let out = bin(&[
        "corpus",
        "compare",
        report_path.to_str().unwrap(),
        "--labels",
        "fixtures/corpus/truth.csv",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_of(&out);
    assert!(text.contains("eliminated"), "stats rendered:\n{text}");
}

#[test]
fn corpus_compare_missing_label_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    // A contract that is not in the truth file at all.
    let sol = dir.path().join("mystery.sol");
    std::fs::write(&sol, "pragma solidity ^0.8.0;\ncontract Mystery { uint256 x; }\n").unwrap();
    let report_path = dir.path().join("report.json");
    let out = bin(&["corpus", "run", sol.to_str().unwrap(), "--format", "json"]);
    std::fs::write(&report_path, &out.stdout).unwrap();

    let out = bin(&[
        "corpus",
        "compare",
        report_path.to_str().unwrap(),
        "--labels",
        "fixtures/corpus/truth.csv",
    ]);
    assert_eq!(code(&out), 2, "unlabeled record is a usage error");
}

#[test]
fn corpus_fetch_offline_uncached_records_failure_but_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(&[
        "corpus",
        "fetch",
        "--address",
        "0x00000000000000000000000000000000000000aa",
        "--cache-dir",
        dir.path().to_str().unwrap(),
        "--offline",
    ]);
    assert_eq!(code(&out), 0, "fetch failures are records, not process failures");
    let text = stdout_of(&out);
    assert!(text.contains("error") || text.contains("not cached"), "output:\n{text}");
}

#[test]
fn corpus_run_address_without_cache_produces_error_record() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(&[
        "corpus",
        "run",
        "0x00000000000000000000000000000000000000bb",
        "--cache-dir",
        dir.path().to_str().unwrap(),
        "--offline",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let records = doc["records"].as_array().unwrap();
    assert_eq!(records.len(), 1);
    assert!(records[0]["error"].as_str().unwrap().contains("not cached"));
}

#[test]
fn bad_address_is_recorded_per_address_not_fatal() {
    let out = bin(&["corpus", "fetch", "--address", "0x1234", "--offline"]);
    assert_eq!(code(&out), 0, "per-address failures are records; the batch continues");
    let text = stdout_of(&out);
    assert!(text.contains("ERROR"), "output:\n{text}");
    assert!(text.to_lowercase().contains("address"), "detail names the problem:\n{text}");
}
