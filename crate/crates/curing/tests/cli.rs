use std::fs;
use std::path::Path;
use std::process::{Command, Output};

mod common;
use common::{bin, fixture};

fn curing(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn hop_solves_toy1_in_one_period() {
    let o = curing(&["solve", "--instance", path(&fixture("toy1.json")), "--no-timings"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for line in ["mode hop", "status optimal", "thb 2", "makespan 1", "gap_pct 0.00"] {
        assert!(out.lines().any(|l| l == line), "missing `{line}` in\n{out}");
    }
    assert!(!out.contains("time_s"));
}

#[test]
fn heuristic_csv_row() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out").join("toy2.csv");
    let o = curing(&[
        "solve", "--instance", path(&fixture("toy2.json")), "--mode", "heuristic", "--seed", "7",
        "--no-timings", "--out", path(&csv),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(curing::bench::CSV_HEADER.join(",").as_str()));
    let row = lines.next().unwrap();
    assert!(row.starts_with("toy2,heuristic,2,2,"), "{row}");
}

#[test]
fn schedule_out_validates() {
    let dir = tempfile::tempdir().unwrap();
    let sched = dir.path().join("s.json");
    let inst = fixture("toy1.json");
    let o = curing(&["solve", "--instance", path(&inst), "--mode", "exact", "--schedule-out", path(&sched)]);
    assert_eq!(o.status.code(), Some(0));

    let o = curing(&["validate", "--instance", path(&inst), "--schedule", path(&sched)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("schedule: feasible, makespan 1"));

    // halve every quantity: demand is no longer met
    let mut s: serde_json::Value = serde_json::from_str(&fs::read_to_string(&sched).unwrap()).unwrap();
    for t in s.as_array_mut().unwrap() {
        let q = t["q"].as_u64().unwrap();
        t["q"] = (q / 2).into();
    }
    fs::write(&sched, s.to_string()).unwrap();
    let o = curing(&["validate", "--instance", path(&inst), "--schedule", path(&sched)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("schedule violation"));
}

#[test]
fn emit_lp_writes_the_model() {
    let dir = tempfile::tempdir().unwrap();
    let lp = dir.path().join("toy1.lp");
    let o = curing(&["solve", "--instance", path(&fixture("toy1.json")), "--mode", "milp", "--emit-lp", path(&lp)]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&lp).unwrap();
    assert!(text.starts_with("\\ toy1 thb 2 parts per-heater\nMinimize\n"));
    assert!(text.ends_with("End\n"));
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\n  \"name\": \"x\",\n  \"phi_dmin\": \"ten\"\n}\n").unwrap();
    let o = curing(&["solve", "--instance", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.json:3:"), "{err}");

    let o = curing(&["solve", "--instance", path(&dir.path().join("missing.json"))]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(curing(&["solve"]).status.code(), Some(2));
    assert_eq!(curing(&["solve", "--instance", "x", "--mode", "simplex"]).status.code(), Some(2));
    assert_eq!(curing(&["--help"]).status.code(), Some(0));
}

#[test]
fn inadmissible_instance_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let mut spec: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(fixture("toy1.json")).unwrap()).unwrap();
    // mold 1 can no longer be cured anywhere
    spec["curing_dmin"].as_array_mut().unwrap().retain(|c| c["mold"] != 1);
    let file = dir.path().join("stuck.json");
    fs::write(&file, spec.to_string()).unwrap();
    for mode in ["heuristic", "hop", "exact"] {
        let o = curing(&["solve", "--instance", path(&file), "--mode", mode]);
        assert_eq!(o.status.code(), Some(1), "{mode}");
    }
    assert_eq!(curing(&["validate", "--instance", path(&file)]).status.code(), Some(1));
}

#[test]
fn time_limit_with_incumbent_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = curing(&["generate", "--scenario", "small", "--count", "1", "--seed", "1", "--out-dir", path(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    let inst = dir.path().join("small-01.json");
    let o = curing(&["solve", "--instance", path(&inst), "--mode", "exact", "--time-limit", "0"]);
    let out = stdout(&o);
    if out.contains("status feasible") {
        assert_eq!(o.status.code(), Some(3), "{out}");
    } else {
        assert!(out.contains("status optimal") && o.status.code() == Some(0), "{out}");
    }
}

#[test]
fn generate_then_bench() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = curing(&["generate", "--scenario", "small", "--count", "2", "--seed", "5", "--out-dir", path(d)]);
    assert_eq!(o.status.code(), Some(0));
    let suite: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("suite.json")).unwrap()).unwrap();
    assert_eq!(suite["instances"], serde_json::json!(["small-01.json", "small-02.json"]));

    // a broken instance gets an error row and the others still run
    fs::write(d.join("broken.json"), "{}").unwrap();
    fs::write(
        d.join("mini.json"),
        r#"{"instances": ["small-01.json", "broken.json"], "modes": ["heuristic"], "iterations": 5}"#,
    )
    .unwrap();
    let csv = d.join("r.csv");
    let o = curing(&["bench", "--suite", path(&d.join("mini.json")), "--out", path(&csv), "--no-timings", "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert!(rows[1].starts_with("small-01,heuristic,"), "{text}");
    assert!(rows[2].starts_with("broken,heuristic,,error"), "{text}");
    assert!(rows.iter().any(|r| r.starts_with("Average,heuristic,")), "{text}");
}
