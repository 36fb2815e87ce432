use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smallsphere"))
        .args(args)
        .env_remove("SMALLSPHERE_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn expand_round_sphere() {
    let o = run(&["expand", "--ricci", "round:1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("m(r) = 1/2 r^3 - 1/4 r^5"));
}

#[test]
fn expand_flat_is_zero() {
    let o = run(&["expand", "--ricci", "flat"]);
    assert!(stdout(&o).contains("m(r) = 0\n"));
}

#[test]
fn expand_with_delta_r_reports_unit_term_and_flag() {
    let o = run(&["expand", "--ricci", "random:3", "--delta-r", "120/1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let c = v["report"]["coefficients"]["deltaRCoeff"].as_str().unwrap();
    assert!(c == "1" || c == "-1");
    assert!(v["report"]["flags"][0].as_str().unwrap().starts_with("gradR-sign"));
}

#[test]
fn verify_flat_passes() {
    let o = run(&["verify", "--ricci", "flat", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["summary"]["pass"], true);
    for e in v["reports"][0]["ledger"].as_array().unwrap() {
        assert_eq!(e["pass"], true);
    }
}

#[test]
fn bad_ricci_file_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "1 0 0\n1/0 0\n1\n").unwrap();
    let o = run(&["verify", "--ricci", &format!("file:{}", path.display())]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn ricci_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ric.txt");
    std::fs::write(&path, "# round sphere\n2 0 0\n2 0\n2\n").unwrap();
    let o = run(&["expand", "--ricci", &format!("file:{}", path.display())]);
    assert!(stdout(&o).contains("m(r) = 1/2 r^3 - 1/4 r^5"));
}

#[test]
fn invalid_configs_exit_2() {
    assert_eq!(run(&["verify", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--radii", "0.1,0.2"]).status.code(), Some(2));
    assert_eq!(run(&["oracle", "--grid", "8x16"]).status.code(), Some(2));
    assert_eq!(run(&["expand", "--ricci", "round:0"]).status.code(), Some(2));
    assert_eq!(run(&["expand"]).status.code(), Some(2));
}

#[test]
fn oracle_flat_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = run(&["oracle", "--ricci", "flat", "--out", out.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(out.join("oracle.json").exists());
    let csv = std::fs::read_to_string(out.join("flat").join("K.csv")).unwrap();
    assert!(csv.starts_with("node,radius,numeric,exact,delta"));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for c in v["runs"][0]["checks"].as_array().unwrap() {
        assert!(c["maxAbsDelta"].as_f64().unwrap() < 1e-10);
    }
}

#[test]
fn seed_from_environment() {
    let a = Command::new(env!("CARGO_BIN_EXE_smallsphere"))
        .args(["verify", "--trials", "2", "--format", "json"])
        .env("SMALLSPHERE_SEED", "11")
        .output()
        .unwrap();
    let b = run(&["verify", "--trials", "2", "--seed", "11", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}
