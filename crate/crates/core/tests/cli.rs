use std::path::PathBuf;
use std::process::{Command, Output};

use archpair::scenario::{Report, Verdict};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_archpair"))
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn run_with(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const WEIL: &str = r#"{"kind": "weil", "f": "z", "g": "1-z"}"#;

#[test]
fn weil_scenario_passes() {
    let path = scratch("weil.json", WEIL);
    let o = run_with(&["weil", "--scenario", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("PASS"));
    assert!(text.contains("product = 1"));
}

#[test]
fn generic_run_accepts_any_kind() {
    let path = scratch("weil-run.json", WEIL);
    assert_eq!(run_with(&["run", "--scenario", path.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn overlapping_supports_fail_one_case_only() {
    let suite = r#"{"kind": "suite", "cases": [
        {"kind": "reciprocity0", "f": "z-1", "g": "(z-1)/(z+1)"},
        {"kind": "reciprocity0", "f": "z", "g": "(z-2)/(z-3)"}
    ]}"#;
    let path = scratch("overlap.json", suite);
    let out = scratch("overlap-report.json", "");
    let o = run_with(&["suite", "--scenario", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let report = Report::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report.cases.len(), 2);
    assert_eq!(report.cases[0].verdict, Verdict::Error);
    assert!(report.cases[0].error.as_deref().unwrap().contains("collide"));
    assert_eq!(report.cases[1].verdict, Verdict::Pass);
}

#[test]
fn failing_verdict_exits_one() {
    let path = scratch("tame-wrong.json", r#"{"kind": "tame", "f": "z", "g": "z-2", "at": "0", "expect": "1/2"}"#);
    let o = run_with(&["tame", "--scenario", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn input_errors_exit_two() {
    let empty = scratch("empty.json", "");
    let o = run_with(&["run", "--scenario", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 1"), "{}", stderr(&o));

    let no_curves = scratch(
        "no-curves.json",
        r#"{"kind": "pair1", "xi1": {"f1": "z", "f2": "w"}, "xi2": {"f1": "z", "f2": "w", "curves": []}}"#,
    );
    let o = run_with(&["pair1", "--scenario", no_curves.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("curves"), "{}", stderr(&o));

    let weil = scratch("weil-mismatch.json", WEIL);
    let o = run_with(&["ledger", "--scenario", weil.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("kind"));

    let o = run_with(&["weil", "--scenario", "/nonexistent/scenario.json"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run_with(&["weil", "--scenario", weil.to_str().unwrap(), "--tol", "-1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run_with(&["weil", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));

    let unknown = scratch("unknown.json", r#"{"kind": "weil", "f": "z", "g": "1-z", "colour": "red"}"#);
    let o = run_with(&["weil", "--scenario", unknown.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("colour"));
}

#[test]
fn json_reports_round_trip_and_repeat() {
    let scenario = r#"{"kind": "suite", "seed": 11, "cases": [
        {"kind": "witness", "eta": [["1", 1], ["-1", -1]]},
        {"kind": "hmap", "r1": "0", "r2": "1", "gamma": {"N": [["2", 1], ["3", -1]]}, "deg_delta_n": 2},
        {"kind": "ledger", "template": "family", "m": 3, "n": 3},
        {"kind": "currents", "functions": ["z-1", "(z+i)/(z-2)"], "t0": "1/2+1/3*i", "h": 0.01}
    ]}"#;
    let path = scratch("mixed.json", scenario);
    let o = run_with(&["suite", "--scenario", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let first = Report::from_json(&stdout(&o)).unwrap();
    assert_eq!(first.seed, 11);
    assert_eq!(first.cases.len(), 4);
    assert_eq!(Report::from_json(&first.to_json()).unwrap(), first);
    let second = Report::from_json(&stdout(&run_with(&[
        "suite",
        "--scenario",
        path.to_str().unwrap(),
        "--format",
        "json",
    ])))
    .unwrap();
    assert_eq!(first.without_timing(), second.without_timing());
}

#[test]
fn seed_flag_overrides_scenario() {
    let path = scratch("witness.json", r#"{"kind": "witness", "seed": 3, "eta": [["0", 1], ["1", -1]]}"#);
    let o = run_with(&["witness", "--scenario", path.to_str().unwrap(), "--seed", "9", "--format", "json"]);
    let report = Report::from_json(&stdout(&o)).unwrap();
    assert_eq!(report.seed, 9);
    assert_eq!(report.cases[0].seed, 9);
}

#[test]
fn bundled_suite_passes() {
    let o = run_with(&["suite", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let report = Report::from_json(&stdout(&o)).unwrap();
    assert!(report.cases.len() >= 10);
    assert!(report.cases.iter().all(|c| c.verdict == Verdict::Pass));
    assert_eq!(report.summary.pass, report.cases.len());
}

#[test]
fn shipped_schemas_cover_every_kind() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas");
    let scenario: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("scenario.schema.json")).unwrap()).unwrap();
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("report.schema.json")).unwrap()).unwrap();
    let text = scenario.to_string();
    for kind in archpair::scenario::Kind::ALL {
        assert!(text.contains(&format!("{{\"const\":\"{}\"}}", kind.name())), "{kind}");
    }
    let provenances = report["$defs"]["value"]["oneOf"].as_array().unwrap();
    assert_eq!(provenances.len(), 3);
}
