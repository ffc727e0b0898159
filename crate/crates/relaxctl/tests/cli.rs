use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use relaxctl::emit::{read_csv, CSV_HEADER};

const SMALL: &str = r#"
sizes = [6]
subsystem_ratios = [0.5]
metrics = ["trace_distance", "bures"]
realizations = 2
base_seed = 11
time_samples = 12

[scenario]
kind = "fig1_random"
"#;

fn relaxometer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relaxometer"))
        .args(args)
        .env_remove("RELAXOMETER_WORKERS")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.toml");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn list_scenarios_prints_every_kind() {
    let out = relaxometer(&["list-scenarios"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let kinds: Vec<&str> = text.lines().collect();
    assert_eq!(kinds, relaxctl::Scenario::KINDS);
}

#[test]
fn run_writes_csv_with_exact_header() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out_dir = dir.path().join("out");
    let out = relaxometer(&["run", "--config", &cfg, "--out", out_dir.to_str().unwrap(), "--workers", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let path = out_dir.join("fig1_random.csv");
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    let rows = read_csv(text.as_bytes()).unwrap();
    assert!(rows.iter().all(|r| r.scenario == "fig1_random" && r.l == 6 && r.seed == "11:0-1"));
}

#[test]
fn json_and_csv_carry_the_same_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out_dir = dir.path().join("out");
    for format in ["csv", "json"] {
        let out = relaxometer(&["run", "--config", &cfg, "--out", out_dir.to_str().unwrap(), "--format", format]);
        assert!(out.status.success());
    }
    let csv_rows = read_csv(fs::File::open(out_dir.join("fig1_random.csv")).unwrap()).unwrap();
    let json: relaxctl::SweepResult =
        serde_json::from_str(&fs::read_to_string(out_dir.join("fig1_random.json")).unwrap()).unwrap();
    assert_eq!(json.rows, csv_rows);
    assert_eq!(json.config.realizations, 2);
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out_dir = dir.path().join("out");
    let out = relaxometer(&["run", "--config", &cfg, "--out", out_dir.to_str().unwrap(), "--seed", "99"]);
    assert!(out.status.success());
    let rows = read_csv(fs::File::open(out_dir.join("fig1_random.csv")).unwrap()).unwrap();
    assert!(rows.iter().all(|r| r.seed == "99:0-1"));
}

#[test]
fn validate_accepts_good_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = relaxometer(&["validate", "--config", &cfg]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("ok: fig1_random"));
}

#[test]
fn invalid_config_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &SMALL.replace("[\"trace_distance\", \"bures\"]", "[]"));
    for args in [vec!["validate", "--config", &cfg], vec!["run", "--config", &cfg, "--out", "unused"]] {
        let out = relaxometer(&args);
        assert_eq!(out.status.code(), Some(2));
        assert!(String::from_utf8(out.stderr).unwrap().starts_with("error:"));
    }
}

#[test]
fn oversized_dense_chain_exits_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &SMALL.replace("sizes = [6]", "sizes = [20]"));
    let out = relaxometer(&["validate", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn missing_config_file_is_an_error() {
    let out = relaxometer(&["validate", "--config", "/nonexistent/config.toml"]);
    assert_eq!(out.status.code(), Some(1));
}
