//! End-to-end CLI contract: subcommands, output formats, and exit codes
//! (0 success, 1 usage/IO, 2 validation failure, 3 oracle disagreement,
//! 4 numeric error).

use std::path::PathBuf;

use mdse::cli;

fn fixture(name: &str) -> String {
    let mut path = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    path.push("tests/fixtures");
    path.push(name);
    path.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut stdout = Vec::new();
    let mut stderr = Vec::new();
    let full: Vec<String> = std::iter::once("mdse".to_string())
        .chain(args.iter().map(|s| s.to_string()))
        .collect();
    let code = cli::run(full, &mut stdout, &mut stderr);
    (
        code,
        String::from_utf8(stdout).unwrap(),
        String::from_utf8(stderr).unwrap(),
    )
}

#[test]
fn infer_prints_value_with_nine_decimals() {
    let (code, out, _) = run(&["infer", &fixture("financial.mdse"), "--event", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next().unwrap(), "0.570000000");
    assert!(out.contains("term hypothesis 0: 0.280000000"));
    assert!(out.contains("term hypothesis 2: 0.140000000"));
}

#[test]
fn infer_and_mode_multiplies() {
    let (code, out, _) = run(&[
        "infer",
        &fixture("financial.mdse"),
        "--event",
        "3",
        "--mode",
        "and",
    ]);
    assert_eq!(code, 0);
    // 0.28 * 0.15 * 0.14
    assert_eq!(out.lines().next().unwrap(), "0.005880000");
}

#[test]
fn infer_unknown_event_is_usage_error() {
    let (code, _, err) = run(&["infer", &fixture("financial.mdse"), "--event", "99"]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown vertex"));
}

#[test]
fn validate_passes_minimal_graph_in_both_modes() {
    let (code, out, _) = run(&["validate", &fixture("minimal.mdse")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("PASS"));
    let (code, out, _) = run(&["validate", &fixture("minimal.mdse"), "--strict"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("PASS"));
}

#[test]
fn validate_reports_loop_rule_with_exit_2() {
    let (code, out, _) = run(&["validate", &fixture("loop.mdse")]);
    assert_eq!(code, 2);
    assert!(out.contains("loop:"), "missing rule id in: {out}");
}

#[test]
fn validate_flags_unnormalized_priors_as_model_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.mdse");
    let text = std::fs::read_to_string(fixture("financial.mdse"))
        .unwrap()
        .replace("0.35", "0.4");
    std::fs::write(&path, text).unwrap();
    let (code, out, _) = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("FAIL (model)"), "got: {out}");
}

#[test]
fn missing_file_is_usage_error() {
    let (code, _, err) = run(&["validate", "/nonexistent/nope.mdse"]);
    assert_eq!(code, 1);
    assert!(!err.is_empty());
}

#[test]
fn malformed_json_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.mdse");
    std::fs::write(&path, "{ nope").unwrap();
    let (code, _, err) = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("syntax"));
}

#[test]
fn posterior_prints_reweighted_vector() {
    let (code, out, _) = run(&[
        "posterior",
        &fixture("reweighting.mdse"),
        "--group",
        "0",
        "--event",
        "2",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("hypothesis 0: 0.857142857"));
    assert!(out.contains("hypothesis 1: 0.142857143"));
}

#[test]
fn posterior_zero_evidence_is_numeric_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.mdse");
    let text = std::fs::read_to_string(fixture("reweighting.mdse"))
        .unwrap()
        .replace("0.8", "0.0")
        .replace("0.2", "0.0");
    std::fs::write(&path, text).unwrap();
    let (code, _, err) = run(&[
        "posterior",
        path.to_str().unwrap(),
        "--group",
        "0",
        "--event",
        "2",
    ]);
    assert_eq!(code, 4);
    assert!(err.contains("evidence"));
}

#[test]
fn checked_infer_rejects_out_of_range_mixture() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("over.mdse");
    let doc = r#"{
  "version": 1,
  "groups": [
    { "role": "prime", "priors": [1.0] },
    { "role": "prime", "priors": [1.0] }
  ],
  "events": [
    { "kind": "prime" }
  ],
  "edges": [
    { "src": 0, "dst": 2, "weight": 0.9 },
    { "src": 1, "dst": 2, "weight": 0.9 }
  ]
}"#;
    std::fs::write(&path, doc).unwrap();
    let (code, out, _) = run(&["infer", path.to_str().unwrap(), "--event", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next().unwrap(), "1.800000000");
    assert!(out.contains("warning"));
    let (code, _, err) = run(&["infer", path.to_str().unwrap(), "--event", "2", "--checked"]);
    assert_eq!(code, 4);
    assert!(err.contains("exceeds 1"));
}

#[test]
fn update_writes_reweighted_graph() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("updated.mdse");
    let (code, out, _) = run(&[
        "update",
        &fixture("reweighting.mdse"),
        "--group",
        "0",
        "--event",
        "2",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("hypothesis 0: 0.857142857"));
    let (code, out, _) = run(&[
        "posterior",
        out_path.to_str().unwrap(),
        "--group",
        "0",
        "--event",
        "2",
    ]);
    assert_eq!(code, 0);
    // Posterior of the updated priors: second conditioning on the same
    // evidence.
    assert!(out.contains("hypothesis 0: 0.960000000"), "got: {out}");
}

#[test]
fn generate_is_deterministic_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.mdse");
    let b = dir.path().join("b.mdse");
    for path in [&a, &b] {
        let (code, _, _) = run(&[
            "generate",
            "--seed",
            "7",
            "--star-events",
            "2",
            "--prime-events",
            "2",
            "--star-groups",
            "2",
            "--prime-groups",
            "1",
            "--max-group-size",
            "2",
            "--density",
            "0.7",
            "--strict",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b);
    // And matches the committed fixture produced by the same config.
    let committed = std::fs::read(fixture("random-seed7.mdse")).unwrap();
    assert_eq!(bytes_a, committed);
}

#[test]
fn generate_infeasible_strict_config_is_rejected() {
    let (code, _, err) = run(&[
        "generate",
        "--seed",
        "0",
        "--star-events",
        "0",
        "--prime-events",
        "1",
        "--star-groups",
        "0",
        "--prime-groups",
        "0",
        "--strict",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("infeasible"));
}

#[test]
fn oracle_check_agrees_on_fixture() {
    let (code, out, _) = run(&["oracle-check", &fixture("random-seed7.mdse"), "--all"]);
    assert_eq!(code, 0, "output: {out}");
    assert!(out.contains("mixture checks"));
    assert!(out.contains("posterior checks"));
    assert!(out.contains("agreement"));
}

#[test]
fn bench_emits_csv_columns() {
    let (code, out, _) = run(&["bench", "--sizes", "24x12,32x16@0.6", "--seed", "1"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "n,m,e,median_ns,repetitions");
    assert_eq!(lines.count(), 2);
}

#[test]
fn bench_rejects_bad_size_spec() {
    let (code, _, err) = run(&["bench", "--sizes", "whatever"]);
    assert_eq!(code, 1);
    assert!(err.contains("bad size item"));
}

#[test]
fn usage_errors_exit_1_and_help_exits_0() {
    let (code, _, err) = run(&["no-such-command"]);
    assert_eq!(code, 1);
    assert!(!err.is_empty());
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("validate"));
    assert!(out.contains("oracle-check"));
}

#[test]
fn identical_invocations_print_identical_bytes() {
    let args = ["infer", &fixture("financial.mdse"), "--event", "3"];
    let (_, first, _) = run(&args);
    let (_, second, _) = run(&args);
    assert_eq!(first, second);
}
