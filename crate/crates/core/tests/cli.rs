use std::path::Path;
use std::process::{Command, Output};

fn jumptrack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jumptrack"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn simulate_then_track_file() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("traj.csv");
    let trace = dir.path().join("trace.csv");
    let out = jumptrack(&["simulate", "--seed", "5", "--out", path(&traj)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&traj).unwrap();
    assert_eq!(text.lines().next().unwrap(), "t,x_true,y,jump_count");
    assert_eq!(text.lines().count(), 1002);

    let out = jumptrack(&["track", "--input", path(&traj), "--out", path(&trace)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(text.lines().count(), 1002);
    assert!(text.lines().all(|l| l.split(',').count() == 10));
}

#[test]
fn track_on_file_matches_fresh_simulation() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("traj.csv");
    assert_eq!(
        code(&jumptrack(&[
            "simulate",
            "--seed",
            "8",
            "--scenario",
            "2",
            "--out",
            path(&traj)
        ])),
        0
    );
    let from_file = jumptrack(&["track", "--input", path(&traj)]);
    let fresh = jumptrack(&["track", "--seed", "8", "--scenario", "2"]);
    assert_eq!(code(&fresh), 0);
    assert_eq!(from_file.stdout, fresh.stdout);
}

#[test]
fn bench_snr_json_to_stdout() {
    let out = jumptrack(&["bench-snr", "--trials", "4", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = value["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert!(rows[0]["nnh_improvement_db"].is_f64());
}

#[test]
fn seed_controls_output() {
    let a = jumptrack(&["bench-mse", "--trials", "5", "--seed", "1"]);
    let b = jumptrack(&["bench-mse", "--trials", "5", "--seed", "1"]);
    let c = jumptrack(&["bench-mse", "--trials", "5", "--seed", "2"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn config_file_is_applied() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"trials": 3, "scenarios": [{"lambda": 2, "jump_mean": 0, "jump_std": 8}]}"#,
    )
    .unwrap();
    let out = jumptrack(&["bench-mse", "--config", path(&cfg)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.contains("\"lambda=2, mu=0, sigma=8\""));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad_json = dir.path().join("bad.json");
    std::fs::write(&bad_json, "{ not json").unwrap();
    let unknown_field = dir.path().join("unknown.json");
    std::fs::write(&unknown_field, r#"{"trails": 3}"#).unwrap();
    let bad_value = dir.path().join("value.json");
    std::fs::write(&bad_value, r#"{"kf": {"q": -1}}"#).unwrap();
    let missing = dir.path().join("missing.json");

    let cases: Vec<Vec<&str>> = vec![
        vec![],
        vec!["frobnicate"],
        vec!["bench-mse", "--format", "xml"],
        vec!["bench-mse", "--trials", "0"],
        vec!["bench-mse", "--seed", "-3"],
        vec!["simulate", "--scenario", "9"],
        vec!["bench-mse", "--config", path(&bad_json)],
        vec!["bench-mse", "--config", path(&unknown_field)],
        vec!["bench-mse", "--config", path(&bad_value)],
        vec!["bench-mse", "--config", path(&missing)],
    ];
    for args in cases {
        let out = jumptrack(&args);
        assert_eq!(
            code(&out),
            2,
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn runtime_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let unwritable = dir.path().join("no/such/dir/out.csv");
    let out = jumptrack(&["simulate", "--out", path(&unwritable)]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("out.csv"));

    let missing = dir.path().join("missing.csv");
    assert_eq!(code(&jumptrack(&["track", "--input", path(&missing)])), 1);
}
