use std::path::PathBuf;
use std::process::{Command, Output};

use gradlab_core::{catalog, export, pipeline};

fn gradlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gradlab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gradlab-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn list_shows_fourteen_gradings() {
    let o = gradlab(&["list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 15);
    assert!(text.contains("q14") && text.contains("Z_2^2 x Z_6") && text.contains("(14,7)"));
    let o = gradlab(&["list", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 14);
}

#[test]
fn verify_q5_passes() {
    let o = gradlab(&["verify", "q5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("type: (28) expected (28) ok"));
    assert!(text.contains("group: Z_2^7 expected Z_2^7 ok"));
    assert!(text.contains("golden: 28/28 ok"));
    assert!(text.contains("status: PASS"));
}

#[test]
fn compare_q5_q10() {
    let o = gradlab(&["compare", "q5", "q10"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "neither refines the other");
    let o = gradlab(&["compare", "q5", "q5"]);
    assert!(stdout(&o).contains("same components"));
}

#[test]
fn unknown_ids_and_commands_fail() {
    let o = gradlab(&["verify", "q15"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("q15"));
    assert!(!gradlab(&["frobnicate"]).status.success());
}

#[test]
fn failing_check_sets_exit_status() {
    // q1's support generates Z x Z_2^3; its catalog heading says Z x Z_2^4.
    let o = gradlab(&["verify", "q1"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("group: Z x Z_2^3 expected Z x Z_2^4 FAIL"));
    assert!(text.contains("golden: 26/26 ok"));
}

#[test]
fn verify_all_is_deterministic_with_a_cache() {
    let dir = scratch("cache");
    let cache = dir.join("basis.json");
    let cache = cache.to_str().unwrap();
    let c = gradlab(&["calibrate", "--calibration", cache]);
    assert!(c.status.success(), "{}", stdout(&c));
    let a = gradlab(&["verify-all", "--calibration", cache, "--jobs", "2"]);
    let b = gradlab(&["verify-all", "--calibration", cache]);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.ends_with("13/14 gradings passed\n"));
    for id in catalog::ids() {
        assert!(text.contains(&format!("{id} ")), "{id}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn export_round_trips() {
    let dir = scratch("export");
    let path = dir.join("q14.json");
    let o = gradlab(&["export", "q14", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let json = std::fs::read_to_string(&path).unwrap();
    let (e, d) = export::import(&json).unwrap();
    assert_eq!(e.id, "q14");
    assert_eq!(e.grading_type, vec![14, 7]);
    let spec = catalog::get_spec("q14").unwrap();
    let basis = pipeline::shared_calibration().unwrap();
    let report = pipeline::report_for(&spec, &d, Some(basis)).unwrap();
    assert!(report.passed());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn compute_prints_components() {
    let o = gradlab(&["compute", "q3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("L(1, 1, 1, -1, -1) [degree (0̄,0̄,0̄,1̄,1̄)] = <b12, b34, b56, b78>"));
    let o = gradlab(&["compute", "q3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["components"].as_array().unwrap().len(), 25);
}

#[test]
fn selftest_runs() {
    let o = gradlab(&["selftest", "--cases", "500", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 5);
}
