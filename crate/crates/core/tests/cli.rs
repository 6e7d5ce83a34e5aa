//! End-to-end runs of the edge34 binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("edge34-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edge34")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn reruns_are_bit_identical() {
    let dir = workdir("rerun");
    let out = dir.join("gap.csv");
    let args = ["gapdist", "--alpha", "0.5", "--t-min", "-4", "--t-max", "2", "--nt", "7", "--out", path(&out)];
    assert!(run(&args).status.success());
    let first = fs::read(&out).unwrap();
    let manifest = fs::read(dir.join("gap.csv.manifest.json")).unwrap();
    let threads = Command::new(env!("CARGO_BIN_EXE_edge34")).args(args).env("EDGE34_THREADS", "1").output().unwrap();
    assert!(threads.status.success());
    assert_eq!(first, fs::read(&out).unwrap());
    assert_eq!(manifest, fs::read(dir.join("gap.csv.manifest.json")).unwrap());
}

#[test]
fn outputs_reference_their_manifest() {
    let dir = workdir("manifest");
    let out = dir.join("k.csv");
    assert!(run(&["kernel", "--alpha", "1", "--s", "0", "--nx", "5", "--out", path(&out)]).status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# command: kernel"));
    assert!(text.contains("k.csv.manifest.json"));
    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(dir.join("k.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "kernel");
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 6);
}

#[test]
fn u_with_closed_form_column() {
    let dir = workdir("u");
    let out = dir.join("u.csv");
    let o = run(&["u", "--alpha", "1", "--s-min", "-4", "--s-max", "4", "--oracle", "closed-form", "--out", path(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert!(header.starts_with("s,u,u_prime"));
}

#[test]
fn exit_codes() {
    let dir = workdir("exit");
    let out = dir.join("x.csv");
    assert_eq!(run(&["kernel", "--alpha", "1"]).status.code(), Some(2));
    assert_eq!(run(&["rhcheck", "--alpha", "0.5", "--out", path(&out)]).status.code(), Some(2));
    // the default grid contains x = 0
    assert_eq!(run(&["kernel", "--alpha", "1", "--s", "0", "--out", path(&out)]).status.code(), Some(0));
    assert_eq!(run(&["kernel", "--alpha", "-0.25", "--s", "0", "--out", path(&out)]).status.code(), Some(2));
    let blow = run(&["u", "--alpha", "3", "--s-min", "-8", "--s-max", "8", "--out", path(&out)]);
    assert_eq!(blow.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&blow.stderr).starts_with("error: "));
    let ok = run(&["rhcheck", "--alpha", "1", "--s", "0", "--out", path(&dir.join("rh.json"))]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("overall PASS"));
}

#[test]
fn config_file_merges_under_flags() {
    let dir = workdir("config");
    let cfg = dir.join("cfg.json");
    fs::write(&cfg, r#"{ "alpha": 0.25, "n": 6 }"#).unwrap();
    let out = dir.join("c.csv");
    let o = run(&["coeffs", "--config", path(&cfg), "--n", "4", "--out", path(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("0.25"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1 + 5);
}

#[test]
fn finite_n_from_ensemble_file() {
    let dir = workdir("finite");
    let ens = dir.join("ens.json");
    fs::write(&ens, r#"{ "v": [2.0, 4.0, 2.0], "n": 10, "N": 10.0, "alpha": 0.0 }"#).unwrap();
    let out = dir.join("f.csv");
    let o = run(&["finite-n", "--ensemble", path(&ens), "--ngrid", "4", "--out", path(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(fs::read_to_string(&out).unwrap().contains("# command: finite-n"));
}
