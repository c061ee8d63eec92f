use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn polarlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polarlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_setup_two_writes_code_files() {
    let tmp = tempfile::tempdir().unwrap();
    let out = polarlab(&["construct", "--setup", "2", "--out", arg(tmp.path())]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let ldpc = read_json(&tmp.path().join("ldpc.json"));
    assert_eq!(ldpc["n_vars"], 155);
    assert_eq!(ldpc["k"], 62);
    assert_eq!(ldpc["var_degree"], 3);
    assert_eq!(ldpc["check_degree_counts"]["5"], 93);
    assert!(ldpc["girth"].as_u64().unwrap() >= 6);

    let polar = read_json(&tmp.path().join("polar.json"));
    assert_eq!(polar["n"], 12);
    assert_eq!(polar["good"].as_array().unwrap().len(), 1984);
    assert_eq!(polar["intermediate"].as_array().unwrap().len(), 155);
    assert_eq!(polar["frozen"].as_array().unwrap().len(), 1957);

    let alist = std::fs::read_to_string(tmp.path().join("ldpc.alist")).unwrap();
    assert_eq!(alist.lines().next().unwrap().split_whitespace().collect::<Vec<_>>(), ["155", "93"]);

    let manifest = read_json(&tmp.path().join("manifest.json"));
    assert_eq!(manifest["command"], "construct");
    assert_eq!(manifest["codes"]["k_ldpc"], 62);
}

#[test]
fn construct_without_ldpc_writes_no_ldpc_files() {
    let tmp = tempfile::tempdir().unwrap();
    let out = polarlab(&["construct", "--setup", "1", "--out", arg(tmp.path())]);
    assert!(out.status.success());
    assert!(tmp.path().join("polar.json").exists());
    assert!(!tmp.path().join("ldpc.json").exists());
    assert!(!tmp.path().join("ldpc.alist").exists());
}

#[test]
fn ber_is_reproducible_for_a_fixed_seed() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let run = |dir: &Path, jobs: &str| {
        let out = polarlab(&[
            "ber", "--n", "6", "--k-good", "26", "--n-ldpc", "15", "--k-ldpc", "6", "--snr", "0:1:2",
            "--frames", "200", "--seed", "5", "--jobs", jobs, "--out", arg(dir),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read_to_string(dir.join("ber.csv")).unwrap()
    };
    let first = run(a.path(), "1");
    assert_eq!(first, run(b.path(), "2"));
    assert_eq!(first.lines().count(), 4);
    let manifest = read_json(&a.path().join("manifest.json"));
    assert_eq!(manifest["master_seed"], 5);
}

#[test]
fn usage_errors_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = arg(tmp.path());
    for args in [
        vec!["ber", "--setup", "9", "--snr", "1", "--out", dir],
        vec!["ber", "--setup", "2", "--snr", "1", "--snr-es", "1", "--out", dir],
        vec!["ber", "--setup", "2", "--snr", "2:0:1", "--out", dir],
        vec!["ber", "--setup", "2", "--out", dir],
        vec!["exit-scatter", "--setup", "2", "--snr", "1", "--estimator", "median", "--out", dir],
        vec!["frobnicate"],
    ] {
        assert_eq!(polarlab(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn runtime_errors_exit_with_three() {
    let out = polarlab(&["cnd-match", "--vnd", "/nonexistent/curve.csv", "--degrees", "4,5"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn scatter_then_match() {
    let tmp = tempfile::tempdir().unwrap();
    let scatter = tmp.path().join("scatter");
    let out = polarlab(&[
        "exit-scatter", "--n", "6", "--k-good", "26", "--n-ldpc", "15", "--k-ldpc", "6", "--snr-es", "1",
        "--frames", "100", "--bins", "16", "--max-iters", "10", "--min-count", "1", "--out", arg(&scatter),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for role in ["vnd", "cnd"] {
        let csv = std::fs::read_to_string(scatter.join(format!("{role}_hist.csv"))).unwrap();
        assert_eq!(csv.lines().next().unwrap(), "x_bin,y_bin,count");
        let total: u64 = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap()).sum();
        let meta = read_json(&scatter.join(format!("{role}_hist.json")));
        assert_eq!(meta["total_points"].as_u64().unwrap(), total);
        assert_eq!(meta["bins"], 16);
        assert_eq!(meta["es_n0_db"], 1.0);
    }

    let flat = tmp.path().join("flat.csv");
    std::fs::write(&flat, "x,y\n0,0.99\n1,1\n").unwrap();
    let matched = tmp.path().join("match");
    let out = polarlab(&[
        "cnd-match", "--vnd", arg(&flat), "--degrees", "4,17", "--step", "0.5", "--saturation", "0.99", "--out", arg(&matched),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = std::fs::read_to_string(matched.join("matches.csv")).unwrap();
    let rows: Vec<&str> = table.lines().collect();
    assert_eq!(rows[0], "rank,avg_check_degree,min_gap,f4,f17");
    assert_eq!(rows.len(), 4);
    assert!(rows[1].starts_with("1,17.0000,"));
}
