use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn dynsub(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynsub"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn write_tmp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dynsub-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn real_rows(n: usize, f: impl Fn(usize, usize) -> f64) -> String {
    let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
    serde_json::json!({ "kind": "complex", "rows": rows }).to_string()
}

#[test]
fn channel_entropy_of_identity_and_depolarizing() {
    // identity at N = 2: Choi matrix N·P_+ has ones at (0,0), (0,3), (3,0), (3,3)
    let id = write_tmp(
        "id.json",
        &real_rows(4, |i, j| if i % 3 == 0 && j % 3 == 0 { 1.0 } else { 0.0 }),
    );
    let out = dynsub(&["channel", "entropy", "--choi", id.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(json_of(&out)["entropy"], 0.0);

    let dep = write_tmp(
        "dep.json",
        &real_rows(4, |i, j| if i == j { 0.5 } else { 0.0 }),
    );
    let out = dynsub(&["channel", "entropy", "--choi", dep.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(json_of(&out)["entropy"].as_f64().unwrap(), 1.38629436112);
}

#[test]
fn classical_entropy_of_flat_matrix() {
    let t = serde_json::json!({ "kind": "real", "rows": vec![vec![1.0 / 3.0; 3]; 3] }).to_string();
    let path = write_tmp("flat.json", &t);
    let out = dynsub(&["classical", "entropy", "--matrix", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["entropy"].as_f64().unwrap(), 1.098612288668);
    assert_eq!(v["map_entropy"].as_f64().unwrap(), 2.197224577336);
    assert_eq!(v["bistochastic"], true);
}

#[test]
fn exit_codes() {
    let garbage = write_tmp("garbage.json", "{ not json");
    assert_eq!(
        dynsub(&["channel", "entropy", "--choi", garbage.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    let three = write_tmp("three.json", &real_rows(3, |i, j| (i == j) as u8 as f64));
    assert_eq!(
        dynsub(&["channel", "entropy", "--choi", three.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    // columns summing to 1.5: a well-formed file that is not stochastic
    let t = serde_json::json!({ "kind": "real", "rows": [[1.0, 0.5], [0.5, 1.0]] }).to_string();
    let bad = write_tmp("notstochastic.json", &t);
    assert_eq!(
        dynsub(&["classical", "entropy", "--matrix", bad.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );

    assert_eq!(
        dynsub(&["verify", "--suite", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(dynsub(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn random_output_round_trips_into_entropy() {
    let out = dynsub(&[
        "random",
        "channel",
        "--dim",
        "3",
        "--seed",
        "7",
        "--bistochastic",
    ]);
    assert!(out.status.success());
    let v = json_of(&out);
    let path = write_tmp("random_choi.json", &v["choi"].to_string());
    let out = dynsub(&["channel", "entropy", "--choi", path.to_str().unwrap()]);
    assert!(out.status.success());
    let s = json_of(&out)["entropy"].as_f64().unwrap();
    assert!(s > 0.0 && s <= 2.0 * 3f64.ln());
}

#[test]
fn qf_commands() {
    let half = write_tmp(
        "half.json",
        &real_rows(2, |i, j| if i == j { 0.5 } else { 0.0 }),
    );
    let out = dynsub(&["qf", "fock", "--symbol", half.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["entropy"].as_f64().unwrap(), 1.38629436112);
    assert_eq!(v["qf_entropy"], v["entropy"]);

    let five = write_tmp(
        "five.json",
        &real_rows(5, |i, j| if i == j { 0.5 } else { 0.0 }),
    );
    assert_eq!(
        dynsub(&["qf", "fock", "--symbol", five.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );

    let out = dynsub(&["random", "qfmap", "--dim", "3", "--seed", "1"]);
    let v = json_of(&out);
    let r = write_tmp("r.json", &v["r"].to_string());
    let z = write_tmp("z.json", &v["z"].to_string());
    let (r, z) = (r.to_str().unwrap(), z.to_str().unwrap());
    let out = dynsub(&[
        "qf",
        "compose",
        "--later-r",
        r,
        "--later-z",
        z,
        "--earlier-r",
        r,
        "--earlier-z",
        z,
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(json_of(&out)["modes"], 3);
}

#[test]
fn verify_writes_report_and_replays() {
    let path = std::env::temp_dir().join(format!("dynsub-report-{}.json", std::process::id()));
    let out = dynsub(&[
        "verify",
        "--suite",
        "powers",
        "--suite",
        "lindblad",
        "--samples",
        "20",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(
        std::fs::read_to_string(&path).unwrap().trim_end(),
        serde_json::to_string_pretty(&v).unwrap()
    );
    let lindblad = &v["suites"][1];
    assert_eq!(lindblad["suite"], "lindblad");
    assert_eq!(lindblad["replay_reproduced"], true);
    assert!(lindblad.get("wall_time").is_none());

    let index = lindblad["worst_case_index"].as_u64().unwrap().to_string();
    let out = dynsub(&[
        "replay",
        "--suite",
        "lindblad",
        "--samples",
        "20",
        "--index",
        &index,
    ]);
    let replay = json_of(&out);
    let tag = lindblad["worst_check"].as_str().unwrap();
    let check = replay["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["tag"] == tag)
        .unwrap();
    assert_eq!(check["slack"], lindblad["worst_violation"]);
}

#[test]
fn negative_tolerance_is_rejected() {
    let out = dynsub(&[
        "verify",
        "--suite",
        "powers",
        "--samples",
        "3",
        "--tol",
        "-1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
