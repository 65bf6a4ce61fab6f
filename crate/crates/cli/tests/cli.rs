//! End-to-end runs of the binary: format round trips, exit-code contract,
//! and byte-identical replay.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tourney"))
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tourney-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

#[test]
fn gen_rotational_has_expected_shape() {
    let dir = tmpdir("gen");
    let out_path = dir.join("t.tour");
    let out = run(bin()
        .args(["gen", "--type", "rotational", "--ell", "3", "-o"])
        .arg(&out_path));
    assert!(out.status.success(), "{out:?}");
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("7\n"));
    assert_eq!(text.lines().count(), 8);
}

#[test]
fn gen_seed_env_fallback() {
    let dir = tmpdir("seed");
    let a = dir.join("a.tour");
    let b = dir.join("b.tour");
    let out = run(bin()
        .env("TOURNEY_SEED", "99")
        .args(["gen", "--type", "random", "--n", "30", "-o"])
        .arg(&a));
    assert!(out.status.success());
    let out = run(bin()
        .args(["gen", "--type", "random", "--n", "30", "--seed", "99", "-o"])
        .arg(&b));
    assert!(out.status.success());
    assert_eq!(
        std::fs::read(&a).unwrap(),
        std::fs::read(&b).unwrap(),
        "env seed must match explicit seed"
    );
}

#[test]
fn hamcycles_verify_round_trip() {
    let dir = tmpdir("roundtrip");
    let tour = dir.join("t.tour");
    let cert = dir.join("cert.json");
    assert!(run(bin()
        .args(["gen", "--type", "random", "--n", "350", "--seed", "2", "-o"])
        .arg(&tour))
    .status
    .success());
    let out = run(bin()
        .args(["hamcycles", "--k", "2", "--mode", "best-effort"])
        .arg(&tour)
        .arg("-o")
        .arg(&cert));
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let out = run(bin().arg("verify").arg(&cert).arg(&tour));
    assert_eq!(out.status.code(), Some(0), "{out:?}");

    // tampering must be caught by the independent verifier
    let mut value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let cycles = value["cycles"].as_array_mut().unwrap();
    let first = cycles[0].as_array_mut().unwrap();
    first.swap(0, 1);
    std::fs::write(&cert, serde_json::to_string(&value).unwrap()).unwrap();
    let out = run(bin().arg("verify").arg(&cert).arg(&tour));
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn hamcycles_replay_is_byte_identical() {
    let dir = tmpdir("replay");
    let tour = dir.join("t.tour");
    assert!(run(bin()
        .args(["gen", "--type", "random", "--n", "320", "--seed", "5", "-o"])
        .arg(&tour))
    .status
    .success());
    let c1 = dir.join("c1.json");
    let c2 = dir.join("c2.json");
    for c in [&c1, &c2] {
        let out = run(bin()
            .args(["hamcycles", "--k", "2"])
            .arg(&tour)
            .arg("-o")
            .arg(c));
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&c1).unwrap(), std::fs::read(&c2).unwrap());
}

#[test]
fn hamcycle_not_strongly_connected_exits_two() {
    let dir = tmpdir("notstrong");
    let tour = dir.join("t.tour");
    assert!(run(bin()
        .args(["gen", "--type", "transitive", "--n", "12", "-o"])
        .arg(&tour))
    .status
    .success());
    let out = run(bin().arg("hamcycle").arg(&tour));
    assert_eq!(out.status.code(), Some(2));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("error"), "structured report expected");
}

#[test]
fn link_emits_paths_and_exit_codes() {
    let dir = tmpdir("link");
    let tour = dir.join("t.tour");
    assert!(run(bin()
        .args(["gen", "--type", "random", "--n", "600", "--seed", "3", "-o"])
        .arg(&tour))
    .status
    .success());
    let out = run(bin()
        .args(["link", "--pairs", "[[0,5],[7,9]]"])
        .arg(&tour));
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let value: serde_json::Value =
        serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["paths"].as_array().unwrap().len(), 2);

    // unreachable pair in a transitive tournament: validated failure
    let ttour = dir.join("trans.tour");
    assert!(run(bin()
        .args(["gen", "--type", "transitive", "--n", "20", "-o"])
        .arg(&ttour))
    .status
    .success());
    let out = run(bin().args(["link", "--pairs", "[[19,0]]"]).arg(&ttour));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn extremal_reports_ceiling() {
    let out = run(bin().args(["extremal", "--m", "5", "--ell", "1"]));
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["regular_ceiling_ok"], serde_json::Value::Bool(true));
    assert_eq!(value["kappa_lower_ok"], serde_json::Value::Bool(true));
}

#[test]
fn malformed_input_is_a_usage_error_with_position() {
    let dir = tmpdir("malformed");
    let bad = dir.join("bad.tour");
    std::fs::write(&bad, "3\n010\n00\n000\n").unwrap();
    let out = run(bin().arg("connectivity").arg(&bad));
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("line 3"), "position missing: {stderr}");
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = run(bin().args(["connectivity", "--nope"]));
    assert_eq!(out.status.code(), Some(1));
}
