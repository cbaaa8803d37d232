use std::path::PathBuf;
use std::process::{Command, Output};

fn sclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sclab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sclab-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn scl_of_commutator() {
    let o = sclab(&["scl", "abAB", "--mode", "exact"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["scl"], "1/2");
    assert_eq!(v["strong_duality"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(sclab(&["scl", "ab"]).status.code(), Some(3));
    assert_eq!(sclab(&["sample", "--n", "7", "--conditioned"]).status.code(), Some(3));
    assert_eq!(sclab(&["--rank", "1", "sample", "--n", "4"]).status.code(), Some(2));
    assert_eq!(sclab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(sclab(&["spectra", "--level", "30"]).status.code(), Some(4));
}

#[test]
fn sampling_is_seeded() {
    let a = stdout(&sclab(&["--seed", "5", "sample", "--n", "20", "--count", "3", "--conditioned"]));
    let b = stdout(&sclab(&["--seed", "5", "sample", "--n", "20", "--count", "3", "--conditioned"]));
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 3);
    assert!(a.lines().all(|l| l.len() == 20));
}

#[test]
fn certificate_round_trip() {
    let dir = scratch("cert");
    let o = sclab(&["certify", "abABabAB", "--out", dir.to_str().unwrap()]);
    assert!(o.status.success());
    let path = dir.join("certificate.json");
    let o = sclab(&["verify-certificate", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("scl >= "));
    let tampered = std::fs::read_to_string(&path).unwrap().replace("\"value\": \"", "\"value\": \"9");
    std::fs::write(&path, tampered).unwrap();
    assert_eq!(sclab(&["verify-certificate", path.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn tripod_and_spectra() {
    let o = sclab(&["tripod-upper", "abAB"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["upper_bound"], "1/2");
    let o = sclab(&["cheeger", "--level", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["h"], "1");
    let o = sclab(&["spectra", "--level", "1", "--triplets"]);
    assert!(stdout(&o).starts_with("# sclab transition matrix"));
}

#[test]
fn slice_manifest_replays() {
    let dir = scratch("slice");
    let o = sclab(&["--mode", "exact", "--out", dir.to_str().unwrap(), "slice", "abAB", "baBA", "--grid", "1"]);
    assert!(o.status.success());
    let manifest = dir.join("manifest.json");
    let first = std::fs::read(dir.join("slice.csv")).unwrap();
    let again = scratch("slice-again");
    let o = sclab(&["--out", again.to_str().unwrap(), "replay", manifest.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert_eq!(std::fs::read(again.join("slice.csv")).unwrap(), first);
    let o = sclab(&["--manifest", manifest.to_str().unwrap(), "phase"]);
    assert_eq!(o.status.code(), Some(2));
}
