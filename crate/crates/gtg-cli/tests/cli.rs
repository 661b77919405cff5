//! End-to-end checks of the command-line surface: descriptor parsing, exit
//! codes, emitted files and the report schemas.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gtg"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures/v1")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

#[test]
fn analyze_set_reports_the_smooth_degree() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let out = run(&[
        "analyze-set",
        "--group",
        fixture("integers_2adic.json").to_str().unwrap(),
        "--set",
        fixture("u2.json").to_str().unwrap(),
        "--depth",
        "8",
        "--json",
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["tool"], "gtg");
    let checks = report["checks"].as_array().unwrap();
    let gamma = checks.iter().find(|c| c["name"] == "gamma").unwrap();
    assert_eq!(gamma["verdict"], "3");
    let gtg = checks.iter().find(|c| c["name"] == "gtg").unwrap();
    assert_eq!(gtg["verdict"], "holds");
    let core = checks.iter().find(|c| c["name"] == "core").unwrap();
    assert_eq!(core["witness"], serde_json::json!(["0"]));
    // The -o file carries the identical JSON.
    let on_disk = std::fs::read(&out_path).unwrap();
    assert_eq!(on_disk, out.stdout);
}

#[test]
fn analyze_set_finds_the_cross_counterexample() {
    let out = run(&[
        "analyze-set",
        "--group",
        fixture("rational_plane.json").to_str().unwrap(),
        "--set",
        fixture("cross.json").to_str().unwrap(),
        "--json",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = report["checks"].as_array().unwrap();
    let gtg = checks.iter().find(|c| c["name"] == "gtg").unwrap();
    assert_eq!(gtg["verdict"], "fails");
    let gamma = checks.iter().find(|c| c["name"] == "gamma").unwrap();
    assert_eq!(gamma["verdict"], "infinity");
}

#[test]
fn analyze_set_on_the_explicit_z8_set() {
    let out = run(&[
        "analyze-set",
        "--group",
        fixture("z8.json").to_str().unwrap(),
        "--set",
        fixture("z8_twosix.json").to_str().unwrap(),
        "--json",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = report["checks"].as_array().unwrap();
    let gamma = checks.iter().find(|c| c["name"] == "gamma").unwrap();
    assert_eq!(gamma["verdict"], "2");
    assert_eq!(gamma["detail"], "exact");
    let nss = checks
        .iter()
        .find(|c| c["name"] == "small-subgroups")
        .unwrap();
    assert_eq!(nss["verdict"], "only the trivial subgroup");
}

#[test]
fn malformed_descriptors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"kind\": \"integers\", \"windows\": 1}").unwrap();
    let out = run(&[
        "analyze-set",
        "--group",
        bad.to_str().unwrap(),
        "--set",
        fixture("u2.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    let missing = dir.path().join("missing.json");
    let out = run(&[
        "analyze-set",
        "--group",
        missing.to_str().unwrap(),
        "--set",
        fixture("u2.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn build_then_verify_round_trips_through_the_binary() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let out = run(&[
        "build-sequence",
        "--group",
        fixture("integers_2adic.json").to_str().unwrap(),
        "--n-max",
        "3",
        "--certificate",
        cert.to_str().unwrap(),
        "--json",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let cert_doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(cert_doc["prefix"][0], "1");
    assert_eq!(cert_doc["epsilon"][0], "1/4");
    assert_eq!(cert_doc["checks"][0]["lhs"], "1/8");
    assert_eq!(cert_doc["checks"][0]["vxn"], "1");

    let verify = run(&[
        "build-sequence",
        "--verify",
        cert.to_str().unwrap(),
        "--json",
    ]);
    assert!(verify.status.success());
    let report: serde_json::Value = serde_json::from_slice(&verify.stdout).unwrap();
    assert_eq!(report["summary"]["failed"], 0);

    // Tampering with a stored value is caught with exit code 1.
    let mut tampered: serde_json::Value = cert_doc.clone();
    tampered["epsilon"][0] = serde_json::json!("1/2");
    let bad_cert = dir.path().join("tampered.json");
    std::fs::write(&bad_cert, serde_json::to_string(&tampered).unwrap()).unwrap();
    let verify = run(&["build-sequence", "--verify", bad_cert.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(1));
}

#[test]
fn degenerate_certificates_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.json");
    std::fs::write(
        &empty,
        r#"{"group":{"kind":"integers","seminorm":"2adic"},"prefix":[],"epsilon":[],"checks":[]}"#,
    )
    .unwrap();
    let out = run(&["build-sequence", "--verify", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // Out-of-range support indices in a restricted-sum certificate.
    let huge = dir.path().join("huge.json");
    std::fs::write(
        &huge,
        r#"{"group":{"kind":"restricted_direct_sum","order_formula":"pow2_plus3","seminorm":"weighted_circle"},"prefix":[[[60,1]]],"epsilon":[],"checks":[]}"#,
    )
    .unwrap();
    let out = run(&["build-sequence", "--verify", huge.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exhausted_stream_budget_is_distinct_from_certified_failure() {
    // Enough budget for every box oracle but not for the deep candidate
    // scan: the third stage needs a generator that only appears past the
    // 6000th stream element.
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "build-sequence",
        "--group",
        fixture("restricted_pow2.json").to_str().unwrap(),
        "--n-max",
        "3",
        "--budget",
        "6000",
        "--certificate",
        dir.path().join("unused.json").to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let build = &report["checks"][0];
    assert_eq!(build["verdict"], "no-sequence-found at stage 3");
    assert!(build["detail"].as_str().unwrap().contains("budget"));
}

#[test]
fn bounded_group_reports_no_sequence() {
    let out = run(&[
        "build-sequence",
        "--group",
        fixture("z2_power10.json").to_str().unwrap(),
        "--n-max",
        "1",
        "--certificate",
        tempfile::tempdir()
            .unwrap()
            .path()
            .join("unused.json")
            .to_str()
            .unwrap(),
        "--json",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let build = &report["checks"][0];
    assert_eq!(build["verdict"], "no-sequence-found at stage 0");
    assert!(build["detail"].as_str().unwrap().contains("order > 4"));
}

#[test]
fn realize_topology_emits_the_level_report() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let built = run(&[
        "build-sequence",
        "--group",
        fixture("integers_2adic.json").to_str().unwrap(),
        "--n-max",
        "4",
        "--certificate",
        cert.to_str().unwrap(),
    ]);
    assert!(built.status.success());
    let out = run(&[
        "realize-topology",
        "--certificate",
        cert.to_str().unwrap(),
        "--depth",
        "3",
        "--eps",
        "1/8",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["depth"], 3);
    assert_eq!(report["gamma"], 2);
    assert_eq!(report["finer"]["eps"], "1/8");
    assert_eq!(report["finer"]["m"], 2);
    assert_eq!(report["strictness"]["verdict"], "holds");
    assert_eq!(
        report["strictness"]["odd_indices_checked"],
        serde_json::json!([1, 3])
    );
    // Level sets nest: every level-1 element appears in level 0.
    let levels = report["levels"].as_object().unwrap();
    let level0: Vec<&str> = levels["0"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    for v in levels["1"].as_array().unwrap() {
        assert!(level0.contains(&v.as_str().unwrap()));
    }
    assert_eq!(levels["4"], serde_json::json!(["0"]));
}

#[test]
fn shallow_realization_reports_unknowns_without_failing() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let built = run(&[
        "build-sequence",
        "--group",
        fixture("integers_2adic.json").to_str().unwrap(),
        "--n-max",
        "1",
        "--certificate",
        cert.to_str().unwrap(),
    ]);
    assert!(built.status.success());
    let out = run(&[
        "realize-topology",
        "--certificate",
        cert.to_str().unwrap(),
        "--depth",
        "1",
    ]);
    assert!(out.status.success(), "unknown verdicts are not failures");
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["gamma"], serde_json::Value::Null);
    assert_eq!(report["strictness"]["verdict"], "unknown");
}

#[test]
fn check_paper_filter_runs_a_subset() {
    let out = run(&["check-paper", "--only", "kgtg", "--json"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    assert!(checks.iter().all(|c| c["anchor"] == "kgtg"));
}

#[test]
fn check_paper_text_mode_prints_one_line_per_check() {
    let out = run(&["check-paper", "--only", "def_nsns"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
        .collect();
    assert_eq!(lines.len(), 1);
    assert!(lines[0].contains("small-subgroup-witness"));
}

#[test]
fn budget_overflow_still_emits_a_partial_report() {
    let out = bin()
        .args([
            "analyze-set",
            "--group",
            fixture("integers_2adic.json").to_str().unwrap(),
            "--set",
            fixture("u2.json").to_str().unwrap(),
            "--budget",
            "10",
            "--json",
        ])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(3));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let gamma = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "gamma")
        .unwrap()
        .clone();
    assert_eq!(gamma["verdict"], "unknown");
    assert!(gamma["detail"].as_str().unwrap().contains("budget"));
}

#[test]
fn budget_environment_variable_is_honored() {
    let out = bin()
        .args([
            "check-paper",
            "--only",
            "weight-class-box-envelope",
            "--json",
        ])
        .env("GTG_BUDGET", "1000")
        .output()
        .expect("binary runs");
    // The budget makes the exhaustive scan impossible: the check reports
    // exhaustion and the run exits with the check-failure code.
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let check = &report["checks"][0];
    assert_eq!(check["verdict"], "unknown");
    assert!(check["detail"].as_str().unwrap().contains("budget"));
}
