use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_wignerghz"));
    c.env_remove("WIGNERGHZ_OUT");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn report_path(out: &Path, command: &str) -> PathBuf {
    let digests: Vec<_> = std::fs::read_dir(out).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(digests.len(), 1, "one digest directory");
    digests[0].join(format!("{command}.report"))
}

fn report(out: &Path, command: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(report_path(out, command)).unwrap()).unwrap()
}

#[test]
fn every_command_passes_on_defaults() {
    for cmd in ["ghz-check", "paradox", "contexts", "frames", "decohere"] {
        let out = TempDir::new().unwrap();
        let o = run(&[cmd, "--out", out.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&o.stdout));
        let r = report(out.path(), cmd);
        assert_eq!(r["passed"], true);
        assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
        assert_eq!(r["config_digest"].as_str().unwrap().len(), 64);
    }
}

#[test]
fn paradox_report_is_byte_identical_across_runs() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for d in [&a, &b] {
        assert_eq!(run(&["paradox", "--seed", "42", "--out", d.path().to_str().unwrap()]).status.code(), Some(0));
    }
    let ra = std::fs::read(report_path(a.path(), "paradox")).unwrap();
    let rb = std::fs::read(report_path(b.path(), "paradox")).unwrap();
    assert_eq!(ra, rb);
}

#[test]
fn paradox_reports_constraints_and_witness() {
    let out = TempDir::new().unwrap();
    run(&["paradox", "--out", out.path().to_str().unwrap()]);
    let r = report(out.path(), "paradox");
    assert_eq!(r["results"]["constraints"], "u*b*c=+1, a*v*c=+1, a*b*w=+1, u*v*w=-1");
    let gf2 = r["checks"].as_array().unwrap().iter().find(|c| c["name"].as_str().unwrap().contains("elimination")).unwrap();
    assert_eq!(gf2["values"]["witness"].as_array().unwrap().len(), 4);
}

#[test]
fn friend_stage_variant_finds_a_global_section() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "fs.json", r#"{"friend_stage_only": true}"#);
    let out = dir.path().join("out");
    let o = run(&["paradox", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&out, "paradox");
    let section = r["checks"].as_array().unwrap().iter().find(|c| c["name"].as_str().unwrap().contains("global section")).unwrap();
    assert_eq!(section["values"]["exists"], true);
}

#[test]
fn corrupted_generators_fail_with_status_one() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "bad.json", r#"{"generators": ["+XZZ", "+ZXZ", "-ZZX"]}"#);
    let out = dir.path().join("out");
    let o = run(&["ghz-check", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let r = report(&out, "ghz-check");
    assert_eq!(r["checks"][1]["passed"], false);
}

#[test]
fn y_context_row_is_one_half() {
    let out = TempDir::new().unwrap();
    run(&["ghz-check", "--out", out.path().to_str().unwrap()]);
    let r = report(out.path(), "ghz-check");
    let p = r["checks"][0]["values"]["rows"]["+++"].as_f64().unwrap();
    assert!((p - 0.5).abs() < 1e-12);
}

#[test]
fn config_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "w0.json", r#"{"lab_width": 0}"#);
    let o = run(&["paradox", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("lab_width"));
    let broken = write_config(dir.path(), "broken.json", "{ nope");
    assert_eq!(run(&["paradox", "--config", broken.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["paradox", "--format", "yaml"]).status.code(), Some(2));
    assert_eq!(run(&["teleport"]).status.code(), Some(2));
}

#[test]
fn environment_variable_sets_output_directory() {
    let out = TempDir::new().unwrap();
    let o = bin().arg("frames").env("WIGNERGHZ_OUT", out.path()).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(report_path(out.path(), "frames").exists());
}

#[test]
fn reordered_config_keys_share_a_directory() {
    let dir = TempDir::new().unwrap();
    let a = write_config(dir.path(), "a.json", r#"{"seed": 3, "lab_width": 2}"#);
    let b = write_config(dir.path(), "b.json", r#"{"lab_width": 2, "seed": 3}"#);
    let out = dir.path().join("out");
    for c in [&a, &b] {
        run(&["frames", "--config", c.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    }
    assert_eq!(std::fs::read_dir(&out).unwrap().count(), 1);
}

#[test]
fn collinear_frames_report_certificates() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"geometry": "collinear", "frames": [["U", "B", "C"]]}"#);
    let out = dir.path().join("out");
    assert_eq!(run(&["frames", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]).status.code(), Some(0));
    let r = report(&out, "frames");
    let analysis = &r["results"]["frames"][0]["analysis"];
    assert_eq!(analysis["verdict"], "no_frame");
    assert!(analysis["determinant"].as_f64().unwrap() <= 0.0);
}

#[test]
fn decohere_writes_columns_and_follows_decay_law() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "d.json", r#"{"dephasing": {"lambda": 0.3, "steps": 10}}"#);
    let out = dir.path().join("out");
    assert_eq!(run(&["decohere", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]).status.code(), Some(0));
    let r = report(&out, "decohere");
    let series = r["checks"][0]["values"]["series"].as_array().unwrap();
    let last = series[10].as_f64().unwrap();
    assert!((last + 0.7f64.powi(10)).abs() < 1e-12);
    let dat = std::fs::read_to_string(report_path(&out, "decohere").with_file_name("decohere.dat")).unwrap();
    assert_eq!(dat.lines().filter(|l| !l.starts_with('#')).count(), 11);
}

#[test]
fn flat_series_without_dephasing() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "d.json", r#"{"dephasing": {"lambda": 0, "steps": 6}}"#);
    let out = dir.path().join("out");
    let o = run(&["decohere", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    for v in r["checks"][0]["values"]["series"].as_array().unwrap() {
        assert!((v.as_f64().unwrap() + 1.0).abs() < 1e-12);
    }
}
