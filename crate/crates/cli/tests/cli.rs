use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cliquestream"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn greedy_nemesis_exact_worst_is_four() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.json");
    let out = run(&[
        "simulate",
        "--strategy",
        "greedy",
        "--nemesis",
        "greedy",
        "--n",
        "8",
        "--opt",
        "exact",
        "--out",
        trace.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("worst ratio 4.000"));
    let json = read_json(&trace);
    assert_eq!(json["worst"]["ratio"], "4.000");
    assert_eq!(json["worst"]["t"], 8);
    let last = json["steps"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(
        (last["ratio_num"].as_u64(), last["ratio_den"].as_u64()),
        (Some(4), Some(1))
    );
    assert_eq!(json["meta"]["strategy"], "greedy");
    assert_eq!(json["meta"]["objective"], "max");
}

#[test]
fn occ_nemesis_worst_near_nine() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.json");
    let out = run(&[
        "simulate",
        "--strategy",
        "occ",
        "--gamma",
        "3.302775638",
        "--nemesis",
        "occ",
        "--phases",
        "5",
        "--variant",
        "plain",
        "--opt",
        "analytic",
        "--out",
        trace.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let json = read_json(&trace);
    let w = &json["worst"];
    let ratio = w["ratio_num"].as_f64().unwrap() / w["ratio_den"].as_f64().unwrap();
    let g: f64 = 3.302775638;
    let target = g * (g + 3.0) / (g - 1.0);
    assert!((ratio - target).abs() <= 0.1 * target, "ratio {ratio}");
}

#[test]
fn mincc_cost_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let out = run(&[
        "simulate",
        "--strategy",
        "greedy-np",
        "--nemesis",
        "mincc",
        "--beta",
        "0",
        "--n",
        "30",
        "--objective",
        "min",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("worst ratio 28.000"));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("t,strategy_value,opt_value,ratio"));
    assert_eq!(text.lines().last(), Some("30,28,1,28.000000"));
}

#[test]
fn verify_suites() {
    let out = run(&["verify", "table"]);
    assert!(out.status.success());
    let json: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["passed"], true);
    assert_eq!(json["details"]["rows_matched"], 9);

    let out = run(&["verify", "profvalue"]);
    assert!(out.status.success());

    let out = run(&["verify", "solver-oracle", "--nmax", "7", "--samples", "2000"]);
    assert!(out.status.success(), "{}", stdout(&out));

    let out = run(&["verify", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn identical_config_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("t{i}.json"));
        let out = run(&[
            "simulate",
            "--strategy",
            "greedy",
            "--random",
            "12",
            "--p",
            "0.5",
            "--seed",
            "42",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let other = dir.path().join("other.json");
    run(&[
        "simulate",
        "--strategy",
        "greedy",
        "--random",
        "12",
        "--p",
        "0.5",
        "--seed",
        "43",
        "--out",
        other.to_str().unwrap(),
    ]);
    assert_ne!(std::fs::read(&other).unwrap(), outputs[0]);
}

#[test]
fn trace_round_trip_recomputes_ratios() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let out = run(&[
        "simulate",
        "--strategy",
        "greedy",
        "--random",
        "10",
        "--p",
        "0.8",
        "--seed",
        "7",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let trace = cliquestream::harness::TraceFile::from_json(&text).unwrap();
    trace.check().unwrap();
    assert_eq!(trace.to_json(), text);
}

#[test]
fn nemesis_file_feeds_simulate_and_opt() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("g.txt");
    let out = run(&["nemesis", "greedy", "--n", "9", "--out", inst.to_str().unwrap()]);
    assert!(out.status.success());
    let out = run(&["simulate", "--strategy", "greedy", "--instance", inst.to_str().unwrap()]);
    assert!(stdout(&out).contains("worst ratio 4.000"), "{}", stdout(&out));
    let out = run(&["opt", "--instance", inst.to_str().unwrap()]);
    let json: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["value"], 16);
    assert_eq!(json["proven_optimal"], true);
    let out = run(&["opt", "--instance", inst.to_str().unwrap(), "--objective", "min"]);
    let json: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["value"], 4);
}

#[test]
fn exit_codes() {
    let out = run(&[
        "simulate",
        "--strategy",
        "greedy",
        "--nemesis",
        "greedy",
        "--n",
        "30",
        "--opt",
        "exact",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["simulate", "--strategy", "nope", "--nemesis", "greedy", "--n", "8"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["simulate", "--strategy", "greedy", "--random", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["simulate", "--instance", "/nonexistent/file"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn skeleton_report_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let out = run(&[
        "skeleton",
        "--strategy",
        "matching",
        "--depth",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let json = read_json(&path);
    let report = &json["report"];
    assert_eq!(report["all_bounds_hold"], true);
    let o = report["o_root"].as_f64().unwrap();
    let s = report["s_root"].as_f64().unwrap();
    assert!(o / s >= 6.0 - report["epsilon"].as_f64().unwrap());
}

#[test]
fn table_and_formula() {
    let out = run(&["table", "--csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 10);
    assert!(text.contains("\n5,566,623,"));
    let out = run(&["formula"]);
    let json: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((json["asymptotic_ratio"].as_f64().unwrap() - 15.6455).abs() < 1e-3);
    let out = run(&["formula", "--gamma", "2", "--x", "1"]);
    assert_eq!(out.status.code(), Some(2));
}
