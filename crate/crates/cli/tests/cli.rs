use std::process::{Command, Output};

fn avfilt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_avfilt")).args(args).output().expect("binary runs")
}

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn zhu_row(preset: &str, cutoff: &str) -> Vec<usize> {
    let o = avfilt(&["dims", "--preset", preset, "--cutoff", cutoff, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["certified"], true);
    v["zhu"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap() as usize).collect()
}

#[test]
fn dims_rows_for_the_presets() {
    assert_eq!(zhu_row("virasoro", "6"), [1, 1, 2, 2, 3, 3, 4]);
    assert_eq!(zhu_row("heisenberg-1", "4"), [1, 2, 3, 4, 5]);
    assert_eq!(zhu_row("affine-sl2", "3"), [1, 4, 10, 20]);
}

#[test]
fn dims_csv_has_one_row_per_degree() {
    let o = avfilt(&["dims", "--preset", "heisenberg-1", "--cutoff", "4", "--format", "csv"]);
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "degree,voa,zhu_level,zhu_graded,c2,certified");
    assert_eq!(lines[5], "4,5,5,1,1,true");
    assert_eq!(lines.len(), 6);
}

#[test]
fn verify_suites_pass() {
    let o = avfilt(&["verify", "--preset", "virasoro", "--suite", "zhu", "--cutoff", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
    let o = avfilt(&["verify", "--preset", "heisenberg-1", "--suite", "bimod", "--module", "fock:1", "--cutoff", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("OK\n"));
}

#[test]
fn filtgen_suite_reports_the_injectivity_counterexample() {
    let o = avfilt(&["verify", "--suite", "filtgen", "--samples", "10", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&o);
    let bad: Vec<&str> = s.lines().filter(|l| l.contains(",fail,")).collect();
    assert_eq!(bad.len(), 1, "{s}");
    assert!(bad[0].contains("injective on left ideals"));
}

#[test]
fn configuration_errors_exit_with_two() {
    let o = avfilt(&["dims", "--file", &data("corrupt.toml")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse"));
    assert_eq!(avfilt(&["dims", "--preset", "nope"]).status.code(), Some(2));
    assert_eq!(avfilt(&["dims", "--preset", "virasoro", "--margin", "0"]).status.code(), Some(2));
    assert_eq!(avfilt(&["dims", "--file", &data("missing.toml")]).status.code(), Some(2));
    assert_eq!(avfilt(&["tensor", "--preset", "heisenberg-1", "--left", "fock:1"]).status.code(), Some(2));
}

#[test]
fn tensor_preset_emits_theta() {
    let o = avfilt(&["tensor", "--instance", "split", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["lift"]["kind"], "lifted");
    assert_eq!(v["lift"]["verified"], true);
    assert_eq!(v["lift"]["theta"], serde_json::json!([["1", "0"], ["0", "1"]]));
    assert_eq!(v["swap"]["well_defined"], true);
}

#[test]
fn tensor_reports_obstruction_and_ill_defined_swap() {
    let o = avfilt(&["tensor", "--instance", "quadratic"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("lift: obstructed"));
    let o = avfilt(&["tensor", "--instance", "matrix-2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness in degree 0"));
}

#[test]
fn heisenberg_fock_pair() {
    let o = avfilt(&["tensor", "--preset", "heisenberg-1", "--left", "fock:1", "--right", "fock:2", "--cutoff", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let s = stdout(&o);
    assert!(s.contains("graded swap: verified"));
    assert!(s.contains("lift: not attempted"));
    assert!(!s.contains("FAIL"));
}

#[test]
fn instance_files_and_mismatched_bases() {
    let pair = data("pair.toml");
    let o = avfilt(&["tensor", "--instance-file", &pair, "--left", "R", "--right", "R"]);
    assert_eq!(o.status.code(), Some(0));
    let o = avfilt(&["tensor", "--instance-file", &pair, "--right-file", &data("other.toml"), "--left", "R", "--right", "R"]);
    assert_eq!(o.status.code(), Some(2));
    let o = avfilt(&["tensor", "--instance-file", &pair, "--left", "R", "--right", "S"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn rewrite_reevaluates() {
    let o = avfilt(&["rewrite", "--preset", "heisenberg-1", "--module", "fock:1", "--cutoff", "4", "--count", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let samples = v.as_array().unwrap();
    assert_eq!(samples.len(), 4);
    assert!(samples.iter().all(|s| s["reevaluates"] == true && s["rewritten"].as_str().unwrap().starts_with("(+")));
    // The Verma module is not generated by its bottom vector under C1.
    let o = avfilt(&["rewrite", "--preset", "virasoro", "--module", "verma:1/2", "--cutoff", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn identical_runs_are_byte_identical() {
    let runs: [&[&str]; 4] = [
        &["verify", "--preset", "heisenberg-1", "--module", "fock:1", "--cutoff", "3", "--seed", "5", "--format", "json"],
        &["rewrite", "--preset", "affine-sl2", "--module", "weyl:1", "--cutoff", "2", "--seed", "9"],
        &["tensor", "--instance", "triple", "--format", "csv"],
        &["dims", "--preset", "virasoro", "--cutoff", "5"],
    ];
    for args in runs {
        let a = avfilt(args);
        let b = avfilt(args);
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}
