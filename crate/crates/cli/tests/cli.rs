use std::process::{Command, Output};

fn bbp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bbp")).args(args).output().expect("run bbp")
}

fn stdout(args: &[&str]) -> String {
    let out = bbp(args);
    assert!(out.status.success(), "bbp {args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    bbp(args).status.code().expect("exit code")
}

/// Compares the fraction `p/q` printed by the CLI with 1/2.
fn at_least_half(frac: &str) -> bool {
    let (p, q) = frac.trim().split_once('/').unwrap();
    let p: num_bigint::BigUint = p.parse().unwrap();
    let q: num_bigint::BigUint = q.parse().unwrap();
    p * 2u32 >= q
}

#[test]
fn classic_birthday_boundary() {
    let base = ["prob", "--days", "365", "--max-per-day", "1", "--format", "frac"];
    let p22 = stdout(&[&base[..], &["--people", "22"]].concat());
    let p23 = stdout(&[&base[..], &["--people", "23"]].concat());
    assert_eq!(p22.lines().count(), 1);
    assert!(at_least_half(&p22));
    assert!(!at_least_half(&p23));
}

#[test]
fn documented_examples() {
    assert_eq!(stdout(&["nmax", "--days", "10", "--max-per-day", "3", "--gamma", "1/2"]), "15\n");
    assert_eq!(stdout(&["stirling", "--objects", "4", "--blocks", "2", "--max-size", "3"]), "7\n");
    assert_eq!(stdout(&["stirling", "--objects", "5", "--blocks", "3", "--max-size", "3"]), "25\n");
    assert_eq!(stdout(&["stirling", "--objects", "4", "--blocks", "2"]), "7\n");
    assert_eq!(stdout(&["prob", "--days", "1", "--people", "0", "--max-per-day", "1"]), "1/1\n");
}

#[test]
fn output_formats() {
    let args = ["prob", "--days", "3", "--people", "3", "--max-per-day", "1"];
    assert_eq!(stdout(&args), "2/9\n");
    assert_eq!(stdout(&[&args[..], &["--format", "dec", "--digits", "5"]].concat()), "0.22222\n");
    let json: serde_json::Value = serde_json::from_str(&stdout(&[&args[..], &["--format", "json"]].concat())).unwrap();
    assert_eq!(json["numerator"], "2");
    assert_eq!(json["denominator"], "9");
    assert_eq!(json["algorithm"], "direct");
    assert_eq!(json["m"], 3);

    let float = stdout(&[&args[..], &["--mode", "float", "--digits", "6"]].concat());
    assert_eq!(float, "0.222222\n");
    assert_eq!(code(&[&args[..], &["--mode", "float", "--format", "frac"]].concat()), 1);
}

#[test]
fn every_algorithm_from_the_command_line() {
    for algo in ["day", "counting", "stirling", "direct", "brute"] {
        let out = stdout(&["prob", "--days", "5", "--people", "7", "--max-per-day", "2", "--algo", algo]);
        assert_eq!(out, "1008/3125\n", "{algo}");
    }
    for algo in ["counting", "stirling", "brute"] {
        let out = stdout(&["count", "--days", "5", "--people", "7", "--max-per-day", "2", "--algo", algo]);
        assert_eq!(out, "25200\n", "{algo}");
    }
    assert_eq!(stdout(&["count", "--days", "3", "--people", "4", "--max-per-day", "2", "--occupied", "2"]), "18\n");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&["prob", "--days", "3"]), 1);
    assert_eq!(code(&["prob", "--days", "3", "--people", "2", "--max-per-day", "1", "--bogus"]), 1);
    assert_eq!(code(&["nmax", "--days", "10", "--max-per-day", "1", "--gamma", "0.5"]), 1);
    assert_eq!(code(&["nmax", "--days", "10", "--max-per-day", "1", "--gamma", "3/2"]), 1);
    assert_eq!(code(&["prob", "--days", "0", "--people", "2", "--max-per-day", "1"]), 1);
    assert_eq!(code(&["prob", "--days", "3", "--people", "2", "--max-per-day", "1", "--algo", "day", "--mode", "float"]), 1);
    assert_eq!(code(&["count", "--days", "3", "--people", "2", "--max-per-day", "1", "--algo", "direct"]), 1);

    let refused = bbp(&["prob", "--days", "365", "--people", "300", "--max-per-day", "3", "--algo", "brute"]);
    assert_eq!(refused.status.code(), Some(2));
    assert!(refused.stdout.is_empty());
    assert_eq!(String::from_utf8(refused.stderr).unwrap().lines().count(), 1);

    let slow = ["count", "--days", "365", "--people", "500", "--max-per-day", "3", "--timeout", "0.001"];
    assert_eq!(code(&slow), 2);
    assert_eq!(code(&["prob", "--days", "1000", "--people", "3334", "--max-per-day", "10", "--algo", "counting"]), 2);
}

#[test]
fn nmax_json_carries_the_certificate() {
    let out = stdout(&["nmax", "--days", "365", "--max-per-day", "1", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(json["n_max"], 22);
    assert_eq!(json["gamma"], "1/2");
    assert!(at_least_half(json["p_at_nmax"].as_str().unwrap()));
    assert!(!at_least_half(json["p_at_nmax_plus_1"].as_str().unwrap()));
}

#[test]
fn table_formats_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("p.cache");
    let cache = cache.to_str().unwrap();
    let args = ["table", "--days", "10,25", "--max-per-day", "1..3"];
    assert_eq!(stdout(&args), "r\\m,10,25\n1,4,6\n2,9,15\n3,15,27\n");
    let md = stdout(&[&args[..], &["--format", "markdown"]].concat());
    assert!(md.starts_with("| r \\ m | 10 | 25 |\n|---|---|---|\n| 1 | 4 | 6 |"));
    let cold = stdout(&[&args[..], &["--cache", cache]].concat());
    let warm = stdout(&[&args[..], &["--cache", cache, "--jobs", "3"]].concat());
    assert_eq!(cold, warm);
    assert!(std::fs::read_to_string(cache).unwrap().starts_with("bbp-cache v1\n"));

    std::fs::write(cache, "not a cache\n").unwrap();
    let corrupt = bbp(&[&args[..], &["--cache", cache]].concat());
    assert_eq!(corrupt.status.code(), Some(1));
    assert!(String::from_utf8(corrupt.stderr).unwrap().contains("delete it"));
}

#[test]
fn xcheck_and_bench_run() {
    let out = stdout(&["xcheck", "--max-days", "5", "--max-people", "8", "--max-per-day", "4"]);
    assert!(out.contains("divergences: 0"));
    assert!(out.ends_with("PASS\n"));

    let out = stdout(&["bench", "--instance", "20,30,2", "--algos", "direct,direct-float,stirling", "--reps", "1"]);
    assert_eq!(out.lines().filter(|l| l.starts_with("(m=20")).count(), 3);
}
