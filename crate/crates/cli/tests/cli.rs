use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_backbend-perc"));
    c.env_remove("BACKBEND_PERC_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn backbend-perc")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json record")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn validate_path_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let up = write(dir.path(), "up.txt", "0 0\n1 1\n# comment\n2 2\n");
    let dip = write(dir.path(), "dip.txt", "0 2\n1 3\n2 2\n");
    let bad = write(dir.path(), "bad.txt", "0 0\n1 x\n");

    let out = run(&["validate-path", "--beta", "const:0", "--path-file", &up]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("valid"));

    let out = run(&["validate-path", "--beta", "const:0", "--path-file", &dip]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("violation at index 2"));
    assert_eq!(run(&["validate-path", "--beta", "const:1", "--path-file", &dip]).status.code(), Some(0));

    let out = run(&["validate-path", "--beta", "const:0", "--path-file", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    assert_eq!(run(&["validate-path", "--beta", "nonsense", "--path-file", &up]).status.code(), Some(1));
}

#[test]
fn beta_round_trips_to_canonical_form() {
    let dir = tempfile::tempdir().unwrap();
    let up = write(dir.path(), "up.txt", "0 0 0\n1 1 1\n");
    let out = run(&["validate-path", "--beta", "prefix:0,1,2,3;const:0", "--path-file", &up]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("beta: prefix:0,1,2,3;const:0"), "{text}");
}

#[test]
fn theta_at_trivial_p() {
    for (p, expected) in [("0", 0.0), ("1", 1.0)] {
        let out = run(&["theta", "--window=-4..4x0..8", "--p", p, "--trials", "50", "--seed", "3"]);
        let v = json(&out);
        assert_eq!(v["result"]["estimate"].as_f64(), Some(expected));
        assert_eq!(v["metadata"]["prf"]["name"], "splitmix64-sponge");
        assert!(v["metadata"]["timestamp_unix"].is_u64());
    }
}

#[test]
fn reproducible_output_is_byte_identical() {
    let args = [
        "theta",
        "--window=-6..6x-6..6x0..12",
        "--p",
        "0.3",
        "--trials",
        "300",
        "--seed",
        "17",
        "--reproducible",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(json(&a)["metadata"].get("timestamp_unix").is_none());
}

#[test]
fn entropy_seed_is_reported() {
    let out = run(&["theta", "--window=-2..2x0..4", "--p", "0.5", "--trials", "5"]);
    let v = json(&out);
    let stderr = String::from_utf8_lossy(&out.stderr);
    let seed = v["metadata"]["master_seed"].as_u64().unwrap();
    assert!(stderr.contains(&format!("seed: {seed}")), "{stderr}");
    assert_eq!(v["metadata"]["seed_source"], "entropy");
}

#[test]
fn synthetic_pc() {
    let out = run(&["pc", "--synthetic-threshold", "0.4", "--tol", "0.001", "--reproducible"]);
    let v = json(&out);
    let (lo, hi) = (v["result"]["lo"].as_f64().unwrap(), v["result"]["hi"].as_f64().unwrap());
    assert!(lo <= 0.4 && 0.4 <= hi && hi - lo <= 0.001, "[{lo}, {hi}]");
}

#[test]
fn pc_requires_a_ladder() {
    assert_eq!(run(&["pc", "--seed", "1"]).status.code(), Some(1));
}

#[test]
fn oracle_exit_codes() {
    let ok = run(&["oracle", "--beta", "const:1", "--window=-3..3x0..6", "--p", "0.6", "--seed", "2"]);
    let v = json(&ok);
    assert_eq!(v["result"]["equal"], true);

    let closed = run(&["oracle", "--beta", "inf", "--window=-3..3x0..6", "--p", "0", "--seed", "2"]);
    let v = json(&closed);
    assert_eq!(v["result"]["walk"], serde_json::json!([[0, 0]]));

    let guarded = run(&["oracle", "--window=-6..6x0..8", "--p", "0.5", "--seed", "2"]);
    assert_eq!(guarded.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&guarded.stderr).contains("--force") || !guarded.stderr.is_empty());

    // A floor that jumps from 0 to 5 lets walks revisit vertices under a new
    // record, which self-avoiding paths cannot do. Some trial shows it.
    let codes: Vec<i32> = (0..200)
        .map(|t| {
            run(&["oracle", "--beta", "cyclic:0,5", "--window=-3..3x0..6", "--p", "0.7", "--seed", "5", "--trial", &t.to_string()])
                .status
                .code()
                .unwrap()
        })
        .collect();
    assert!(codes.iter().all(|&c| c == 0 || c == 3));
    assert!(codes.contains(&3), "no discrepancy in 200 trials");
}

#[test]
fn oracle_dump_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("cluster.csv");
    let out = run(&[
        "oracle",
        "--beta",
        "inf",
        "--window=-3..3x0..6",
        "--p",
        "1",
        "--seed",
        "1",
        "--dump",
        dump.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&dump).unwrap();
    assert!(text.starts_with("x1,x2\n"), "{text}");
    // Unoriented at p = 1, so every window vertex is listed.
    assert_eq!(text.lines().count(), 1 + 24, "{text}");
    assert!(text.lines().any(|l| l == "0,0"));
}

#[test]
fn block_event_trivial() {
    let base = ["block-event", "--window=-4..4x0..8", "--r", "1", "--x=0,0", "--z=0,4", "--trials", "20", "--seed", "1"];
    let zero = json(&run(&[&base[..], &["--p", "0"]].concat()));
    assert_eq!(zero["result"]["estimate"].as_f64(), Some(0.0));
    let one = json(&run(&[&base[..], &["--p", "1"]].concat()));
    assert_eq!(one["result"]["estimate"].as_f64(), Some(1.0));
}

#[test]
fn sweep_minimal_curve() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"mode": "curve", "p_grid": [0, 1], "trials": 20, "seed": 1}"#);
    let csv = dir.path().join("out.csv");
    let v = json(&run(&["sweep", "--config", &cfg, "--csv", csv.to_str().unwrap()]));
    assert_eq!(v["metadata"]["seed_source"], "config");
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 3, "{text}");
    assert!(rows[0].starts_with("p,estimate"));
    assert!(rows[1].starts_with("0.0,0.0,"), "{text}");
    assert!(rows[2].starts_with("1.0,1.0,"), "{text}");
}

#[test]
fn sweep_ladder_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"mode": "ladder", "dimension": 3, "window": "-6..6x-6..6x0..12", "e": 2, "l": [1, 2, 4],
            "seed": 4, "bisect": {"lo": 0.0, "hi": 1.0, "tol": 0.1, "initial_trials": 50, "max_trials": 100}}"#,
    );
    let csv = dir.path().join("ladder.csv");
    let v = json(&run(&["sweep", "--config", &cfg, "--csv", csv.to_str().unwrap()]));
    assert_eq!(v["result"]["rows"].as_array().unwrap().len(), 3);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 4, "{text}");
}

#[test]
fn sweep_compare_reports_containment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"mode": "compare", "dimension": 3, "window": "-6..6x-6..6x0..12", "trials": 100, "seed": 8,
            "spec_a": "const:0", "spec_b": "prefix:0,1,2,3;const:0", "p_grid": [0.25, 0.3]}"#,
    );
    let v = json(&run(&["sweep", "--config", &cfg]));
    for row in v["result"].as_array().unwrap() {
        assert_eq!(row["dominated"], true);
        assert_eq!(row["contained"], row["trials"]);
    }
}

#[test]
fn sweep_schema_error_points_at_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"mode": "curve", "p_grid": [0, "half"]}"#);
    let out = run(&["sweep", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("/p_grid/1"), "{stderr}");

    let cfg = write(dir.path(), "d.json", r#"{"mode": "ladder", "l": [1]}"#);
    let stderr = String::from_utf8_lossy(&run(&["sweep", "--config", &cfg]).stderr).into_owned();
    assert!(stderr.contains("/e") || stderr.contains("/bisect"), "{stderr}");
}

#[test]
fn schemas_are_json() {
    for which in ["result", "sweep"] {
        let out = run(&["schema", which]);
        let v = json(&out);
        assert!(v["$schema"].as_str().unwrap().contains("2020-12"));
    }
}

#[test]
fn zero_threads_is_rejected() {
    let out = run(&["--threads", "0", "theta", "--window=-2..2x0..4", "--p", "0.5", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
}
