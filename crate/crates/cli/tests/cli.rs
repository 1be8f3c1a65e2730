use std::path::Path;
use std::process::{Command, Output};

use arealaw_cli::report::validate_report_json;

fn arealaw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arealaw")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn passing_run_exits_zero_and_emits_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let config = write_config(
        dir.path(),
        "aklt.json",
        &format!(
            r#"{{"schema_version": 1, "experiment": "fcs-decay", "presets": ["aklt"],
                "params": {{"slope_tolerance": 0.05}}, "output": {:?}}}"#,
            out_dir.to_str().unwrap()
        ),
    );
    let out = arealaw(&["run", &config]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("fit aklt.trace_distance_slope = -1.09"));
    let csv = std::fs::read_to_string(out_dir.join("fcs-decay.csv")).unwrap();
    assert!(csv.starts_with("L,trace_distance,mutual_information,bound\n"));
    assert_eq!(csv.lines().count(), 13);
    let report = validate_report_json(&std::fs::read_to_string(out_dir.join("fcs-decay.json")).unwrap()).unwrap();
    assert!(report.passed());
}

#[test]
fn failed_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "rate.json",
        r#"{"schema_version": 1, "experiment": "fcs-decay", "presets": ["aklt"], "params": {"mi_rate_tolerance": 0.1}}"#,
    );
    let out = arealaw(&["run", &config]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL mutual-information-rate"));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        r#"{"schema_version": 1, "experiment": "fcs-decay", "sede": 4}"#,
        r#"{"schema_version": 1, "experiment": "fcs-decay", "presets": ["no-such-channel"]}"#,
        r#"{"schema_version": 1, "experiment": "correlator-bound"}"#,
        r#"{"schema_version": 1, "experiment": "concavity", "params": {"beta": []}}"#,
        r#"{"schema_version": 3, "experiment": "concavity"}"#,
    ];
    for (k, body) in cases.iter().enumerate() {
        let config = write_config(dir.path(), &format!("bad{k}.json"), body);
        let out = arealaw(&["run", &config]);
        assert_eq!(out.status.code(), Some(2), "{body}");
    }
    assert_eq!(arealaw(&["run", "/nonexistent/config.json"]).status.code(), Some(2));
    assert_eq!(arealaw(&["fuzz", "no-such-experiment", "--seed", "1"]).status.code(), Some(2));
}

#[test]
fn dimension_cap_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "tfim.json",
        r#"{"schema_version": 1, "experiment": "concavity", "presets": ["tfim-ring-8"], "params": {"beta": [1.0]}}"#,
    );
    let out = Command::new(env!("CARGO_BIN_EXE_arealaw"))
        .args(["run", &config])
        .env("AREALAW_DIM_CAP", "64")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("256"));
}

#[test]
fn presets_lists_the_catalog() {
    let out = arealaw(&["presets"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.starts_with("aklt ") && l.contains(" 3 ") && l.contains(" 2 ")));
    assert!(text.lines().any(|l| l.starts_with("ising-ring-8 ")));
    let json: serde_json::Value = serde_json::from_slice(&arealaw(&["presets", "--json"]).stdout).unwrap();
    let aklt = json.as_array().unwrap().iter().find(|p| p["name"] == "aklt").unwrap();
    assert_eq!((aklt["bond_dim"].as_u64(), aklt["local_dim"].as_u64()), (Some(2), Some(3)));
}

#[test]
fn fuzz_is_reproducible() {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        let out = arealaw(&["fuzz", "shell-chain", "--seed", "11", "--draws", "4", "--output", d.path().to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    }
    for name in ["shell-chain.csv", "shell-chain.json"] {
        let a = std::fs::read(dirs[0].path().join(name)).unwrap();
        let b = std::fs::read(dirs[1].path().join(name)).unwrap();
        assert_eq!(a, b, "{name}");
    }
}
