use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;
use turnfold::sim::harmonic;

fn turnfold(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_turnfold"))
        .args(args)
        .env("TURNFOLD_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: {}\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

#[test]
fn check_full_turn_line_is_unfoldable() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "l67.json", r#"{"states": [6, 6, 6, 6, 6, 6, 0]}"#);
    let out = turnfold(&["check", &m]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["verdict"], "unfoldable");
    assert!(!v["witness"].as_array().unwrap().is_empty());
}

#[test]
fn check_foldable_line() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "l35.json", r#"{"states": [3, 3, 3, 3, 0]}"#);
    let out = turnfold(&["check", &m]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "folds");
}

#[test]
fn check_inconclusive_exits_zero() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "l38.json", r#"{"states": [3, 3, 3, 3, 3, 3, 3, 0]}"#);
    let out = turnfold(&["check", &m, "--cap", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "inconclusive");
}

#[test]
fn fold_square_has_zero_error() {
    let dir = TempDir::new().unwrap();
    let gen = turnfold(&["shape", "gen", "square", "5"]);
    assert!(gen.status.success());
    let s = dir.path().join("sq5.json");
    std::fs::write(&s, &gen.stdout).unwrap();
    let out = turnfold(&["fold", s.to_str().unwrap(), "--trials", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["max_error"], 0);
    assert_eq!(v["final_count"], 200);
}

#[test]
fn fold_scaled_square() {
    let dir = TempDir::new().unwrap();
    let s = write(&dir, "sq2.json", r#"{"points": [[0,0],[1,0],[0,1],[1,1]]}"#);
    let out = turnfold(&["fold", &s, "--scale2", "--trials", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["n"], 16);
    assert_eq!(v["max_error"], 0);
}

#[test]
fn timing_tracks_harmonic_numbers() {
    let out = turnfold(&["timing", "--s", "1", "--sizes", "16,64,256", "--trials", "1000"]);
    assert!(out.status.success());
    let mut r = csv::Reader::from_reader(&out.stdout[..]);
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        ["n", "trials", "mean_time", "std_time", "blocked_fraction", "mean_steps"]
    );
    let mut rows = 0;
    for rec in r.records() {
        let rec = rec.unwrap();
        let n: usize = rec[0].parse().unwrap();
        let mean: f64 = rec[2].parse().unwrap();
        let sd: f64 = rec[3].parse().unwrap();
        let h = harmonic(n - 1);
        assert!((mean - h).abs() < 4.0 * sd / 1000f64.sqrt(), "n={n} mean={mean} h={h}");
        rows += 1;
    }
    assert_eq!(rows, 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("r2"));
}

#[test]
fn simulate_is_deterministic_and_exports_events() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", r#"{"states": [3, 3, 3, 3, 3, 0]}"#);
    let ev = dir.path().join("ev.jsonl");
    let a = turnfold(&["simulate", &m, "--seed", "7", "--events", ev.to_str().unwrap()]);
    let b = turnfold(&["simulate", &m, "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    let lines = std::fs::read_to_string(&ev).unwrap();
    assert_eq!(lines.lines().count() as u64, v["step_count"].as_u64().unwrap());
    for l in lines.lines() {
        let e: Value = serde_json::from_str(l).unwrap();
        assert!(e["t"].is_f64() && e["i"].is_u64() && e["s"].is_i64());
    }
    let stats = json(&turnfold(&["simulate", &m, "--trials", "50"]));
    assert_eq!(stats["trials"], 50);
}

#[test]
fn compile_outputs_load_as_machines() {
    let dir = TempDir::new().unwrap();
    let gen = turnfold(&["shape", "gen", "square", "3", "--traversal"]);
    let p = dir.path().join("p.json");
    std::fs::write(&p, &gen.stdout).unwrap();
    let out = turnfold(&["compile", "zigzag", p.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(json(&out)["states"], serde_json::json!([0, 0, 1, 3, 3, 1, 0, 0, 0]));
    let prog = dir.path().join("prog.json");
    std::fs::write(&prog, &out.stdout).unwrap();
    assert_eq!(turnfold(&["check", prog.to_str().unwrap()]).status.code(), Some(0));

    let out = turnfold(&["compile", "path", p.to_str().unwrap(), "--anchor", "-6"]);
    assert_eq!(json(&out)["states"][0], -6);

    let out = turnfold(&["compile", "spiral", "2"]);
    assert_eq!(json(&out)["states"].as_array().unwrap().len(), 46);
    let bad = turnfold(&["compile", "spiral", "1", "--t0", "1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn scaled_compile_reports_printed_sign() {
    let dir = TempDir::new().unwrap();
    let s = write(&dir, "sq2.json", r#"{"points": [[0,0],[1,0],[0,1],[1,1]]}"#);
    let fixed = turnfold(&["compile", "scaled", &s]);
    let printed = turnfold(&["compile", "scaled", &s, "--as-printed"]);
    let fv: Value = serde_json::from_slice(&fixed.stderr).unwrap();
    let pv: Value = serde_json::from_slice(&printed.stderr).unwrap();
    assert!(fv["adjacent_violation"].is_null());
    assert!(pv["adjacent_violation"].is_u64());
}

#[test]
fn render_machine_and_trajectory() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "l39.json", r#"{"states": [3,3,3,3,3,3,3,3,0]}"#);
    let svg = dir.path().join("a.svg");
    let svg2 = dir.path().join("b.svg");
    // drive L3_9 to states 1,3,1,1,3,1,1,3,0
    let moves = "0,0,2,2,3,3,5,5,6,6";
    for out in [&svg, &svg2] {
        let r = turnfold(&["render", &m, "-o", out.to_str().unwrap(), "--moves", moves]);
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    }
    let a = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(a, std::fs::read_to_string(&svg2).unwrap());
    assert!(a.matches("bond blocked").count() > 0);

    let ev = dir.path().join("ev.jsonl");
    turnfold(&["simulate", &m, "--seed", "3", "--events", ev.to_str().unwrap()]);
    let traj = dir.path().join("t.svg");
    let no_machine = turnfold(&["render", ev.to_str().unwrap(), "-o", traj.to_str().unwrap()]);
    assert_eq!(no_machine.status.code(), Some(2));
    let r = turnfold(&[
        "render",
        ev.to_str().unwrap(),
        "-o",
        traj.to_str().unwrap(),
        "--machine",
        &m,
        "--stride",
        "5",
    ]);
    assert!(r.status.success());
    assert!(std::fs::read_to_string(&traj).unwrap().contains("class=\"frame\""));
}

#[test]
fn usage_and_io_errors_exit_two() {
    assert_eq!(turnfold(&["check", "/nonexistent/m.json"]).status.code(), Some(2));
    assert_eq!(turnfold(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(turnfold(&["timing", "--s", "1"]).status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "bad.json", r#"{"states": [1, 2,"#);
    let out = turnfold(&["check", &m]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    assert!(Path::new(&m).exists());
}
