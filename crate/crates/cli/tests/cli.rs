use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steinberg-lab"))
        .args(args)
        .env_remove("STEINBERG_LAB_WORKERS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn strip_runtime(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("runtime_ms");
            m.values_mut().for_each(strip_runtime);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_runtime),
        _ => {}
    }
}

#[test]
fn solomon_tits_three_two() {
    let o = lab(&["--suite", "solomon-tits", "--n", "3", "--p", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["computed"]["dim"], 8);
    assert_eq!(v["pass"], true);
    assert_eq!(v["parameters"]["n"], 3);
    assert!(v["tool_version"].is_string());
}

#[test]
fn modular_level_one_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.json");
    let o = lab(&["--suite", "modular-symbols", "--level", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&out);
    assert_eq!(v["computed"]["dims"]["1"], 0);
    let csv = std::fs::read_to_string(dir.path().join("m.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "N,cosets,relation_rank,dim_h1,oracle,pass");
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn modular_level_range() {
    let o = lab(&["--suite", "modular-symbols", "--level", "1..4"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["computed"]["dims"]["4"], 5);
    assert_eq!(v["computed"]["levels"].as_array().unwrap().len(), 4);
}

#[test]
fn tau_vanishing_two_two() {
    let o = lab(&["--suite", "tau-vanishing", "--n", "2", "--p", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["computed"]["max_abs_entry"], 0);
    assert_eq!(v["computed"]["tau_order"], 2);
    assert!(v["constants"].is_object());
}

#[test]
fn phi_vs_psi_records_signs() {
    let o = lab(&["--suite", "phi-vs-psi"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    let signs = &v["constants"]["suspension_signs"];
    for k in ["cone_ambient", "prism", "cone_line"] {
        let s = signs[k].as_i64().unwrap();
        assert!(s == 1 || s == -1, "{k} = {s}");
    }
}

#[test]
fn bad_parameters_exit_two() {
    assert_eq!(code(&lab(&["--suite", "solomon-tits", "--p", "4"])), 2);
    assert_eq!(code(&lab(&["--suite", "ash-exactness", "--n", "9", "--p", "7"])), 2);
    assert_eq!(code(&lab(&["--suite", "no-such-suite"])), 2);
    assert_eq!(code(&lab(&["--suite", "modular-symbols", "--level", "5..1"])), 2);
    assert_eq!(code(&lab(&["--suite", "lattice", "--height", "9"])), 2);
    assert_eq!(code(&lab(&[])), 2);
}

#[test]
fn missing_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&["--config", dir.path().join("absent.toml").to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn malformed_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "[[suite]]\nname = \"solomon-tits\"\nprimes = [2]\n").unwrap();
    assert_eq!(code(&lab(&["--config", cfg.to_str().unwrap()])), 2);
}

#[test]
fn wrong_expected_value_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(
        &cfg,
        "[[suite]]\nname = \"solomon-tits\"\nn = [3]\np = [2]\nexpected = { \"/dim\" = 9 }\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = lab(&["--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let summary = read_json(&out.join("summary.json"));
    assert_eq!(summary["failed"], 1);
    assert_eq!(summary["jobs"][0]["failed_keys"][0], "/dim");
    let cert = read_json(&out.join("solomon-tits_n3_p2.json"));
    assert_eq!(cert["computed"]["dim"], 8);
    assert_eq!(cert["module_pass"], true);
    assert_eq!(cert["pass"], false);
}

#[test]
fn empty_grid_passes_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "[[suite]]\nname = \"ash-exactness\"\nn = []\n").unwrap();
    let out = dir.path().join("out");
    let o = lab(&["--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    assert_eq!(read_json(&out.join("summary.json"))["jobs"], Value::Array(vec![]));
}

#[test]
fn grid_runs_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(
        &cfg,
        "[[suite]]\nname = \"solomon-tits\"\nn = [2, 3]\np = [2, 3]\n\n[[suite]]\nname = \"modular-symbols\"\nlevel = [1, 2, 3]\n\n[[suite]]\nname = \"nilmanifold\"\nn = [3]\n",
    )
    .unwrap();
    let run = |workers: &str, out: &Path| {
        let o = lab(&[
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--workers",
            workers,
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    };
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    run("1", &a);
    run("3", &b);
    let summary = read_json(&a.join("summary.json"));
    assert_eq!(summary["passed"], 6);
    assert!(a.join("modular-symbols_level1-2-3.csv").exists());

    let mut names: Vec<_> = std::fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 8);
    for name in names {
        let (pa, pb) = (a.join(&name), b.join(&name));
        if pa.extension().is_some_and(|e| e == "json") {
            let (mut x, mut y) = (read_json(&pa), read_json(&pb));
            strip_runtime(&mut x);
            strip_runtime(&mut y);
            assert_eq!(x, y, "{name:?}");
            let text = std::fs::read_to_string(&pa).unwrap();
            let without: String = text.lines().filter(|l| !l.contains("\"runtime_ms\"")).collect();
            let other = std::fs::read_to_string(&pb).unwrap();
            let other: String = other.lines().filter(|l| !l.contains("\"runtime_ms\"")).collect();
            assert_eq!(without, other, "{name:?} differs byte-wise");
        } else {
            assert_eq!(std::fs::read(&pa).unwrap(), std::fs::read(&pb).unwrap());
        }
    }
}

#[test]
fn workers_env_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_steinberg-lab"))
        .args(["--suite", "nilmanifold"])
        .env("STEINBERG_LAB_WORKERS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_steinberg-lab"))
        .args(["--suite", "nilmanifold"])
        .env("STEINBERG_LAB_WORKERS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
}
