use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steane-tgate"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn matching_cells_exit_zero() {
    let out = run(&["table1", "--method", "ge0,get", "--compare"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "table1");
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["cells"].as_array().unwrap().len(), 4);
}

#[test]
fn mismatching_cells_exit_one() {
    let out = run(&["table3", "--method", "ft", "--stage", "perfect-ec", "--compare"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["all_pass"], false);
    let cell = &v["cells"][0];
    assert_eq!(cell["measure"], "gate_fidelity");
    assert_eq!(cell["comparison"]["pass"], false);
}

#[test]
fn without_compare_always_exits_zero() {
    let out = run(&["table3", "--method", "get", "--stage", "t-gate", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("table,method,stage,measure,px,py,pz"));
    assert!(lines.next().unwrap().starts_with("3,get,t-gate,gate_fidelity,"));
}

#[test]
fn point_evaluation() {
    let out = run(&["table2", "--method", "get", "--stage", "t-gate", "--alpha", "0", "--beta", "0", "--compare"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    for cell in v["cells"].as_array().unwrap() {
        assert_eq!(cell["samples"].as_array().unwrap().len(), 1);
    }
}

#[test]
fn invalid_arguments_exit_two() {
    for args in [
        &["table2", "--method", "get", "--rounds", "1"][..],
        &["table2", "--method", "nope"],
        &["table1", "--order", "5"],
        &["dump-circuit", "--stage", "t-gate,noisy-ec", "--method", "ft"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    }
}

#[test]
fn oracle_check_passes() {
    let out = run(&["oracle-check", "--order", "1", "--workers", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["all_pass"], true);
    assert!(v["rows"].as_array().unwrap().len() >= 24);
}

#[test]
fn dump_to_file() {
    let path = std::env::temp_dir().join(format!("steane-tgate-dump-{}.json", std::process::id()));
    let out = run(&[
        "dump-circuit", "--method", "get", "--stage", "noisy-ec", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["stage"], "noisy-ec");
    assert_eq!(v["circuit"]["locations"].as_array().unwrap().len(), v["locations"].as_u64().unwrap() as usize);
}

#[test]
fn sweep_reports_fits() {
    let out = run(&["sweep", "--method", "get", "--stage", "t-gate", "--grid", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["sweep", "--method", "get", "--stage", "t-gate", "--grid", "5", "--format", "markdown"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("| get | t-gate | logical qubit |"));
}
