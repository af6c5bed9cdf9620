use std::fs;
use std::process::{Command, Output};

fn nyman(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nyman"))
        .args(args)
        .env_remove("NYMAN_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn distance_at_two() {
    let o = nyman(&["distance", "--L", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("L,basis,d2,a_est,cond,ridge,method\n"));
    let r = rows(&o);
    let d2: f64 = r[0][2].parse().unwrap();
    assert!((d2 - (1.0 - 2f64.ln())).abs() < 1e-12);
}

#[test]
fn distance_at_one_is_degenerate() {
    let o = nyman(&["distance", "--L", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(rows(&o)[0][2], "1");
    assert!(String::from_utf8_lossy(&o.stderr).contains("degenerate"));
    let j = nyman(&["distance", "--L", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
    assert_eq!(v[0]["degenerate"], true);
}

#[test]
fn both_methods_agree() {
    let o = nyman(&["distance", "--L", "20..30", "--method", "both"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    assert_eq!(r.len(), 22);
    for pair in r.chunks(2) {
        assert_eq!(pair[0][0], pair[1][0]);
        assert_eq!((pair[0][6].as_str(), pair[1][6].as_str()), ("ls", "det"));
        let a: f64 = pair[0][2].parse().unwrap();
        let b: f64 = pair[1][2].parse().unwrap();
        assert!((a - b).abs() <= 1e-8);
    }
}

#[test]
fn output_is_reproducible() {
    let a = nyman(&["--threads", "1", "distance", "--L", "2..40", "--basis", "square-free"]);
    let b = nyman(&["--threads", "1", "distance", "--L", "2..40", "--basis", "square-free"]);
    let c = nyman(&["distance", "--L", "2..40", "--basis", "square-free"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn help_and_usage_errors() {
    for args in [&["--help"][..], &["distance", "--help"], &["verify", "--help"]] {
        let o = nyman(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert!(stdout(&o).contains("Usage"));
    }
    for args in [
        &["distance", "--L", "abc"][..],
        &["distance", "--L", "0"],
        &["distance", "--L", "5..3"],
        &["distance", "--L", "2", "--method", "qr"],
        &["distance", "--L", "2", "--bogus"],
        &["distance", "--L", "2", "--truncation", "-5"],
        &["--threads", "0", "distance", "--L", "2"],
        &["residual", "--L", "2", "--eps", "-1"],
        &["verify", "zeta"],
        &[],
    ] {
        let o = nyman(args);
        assert_eq!(o.status.code(), Some(64), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn verify_suites() {
    for suite in ["mellin", "xi", "unitary"] {
        let o = nyman(&["verify", suite]);
        assert_eq!(o.status.code(), Some(0), "{suite}");
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["pass"], true);
        assert!(v["checks"].as_array().unwrap().iter().all(|c| c["max_residual"].as_f64().unwrap() <= 1e-8));
    }
}

#[test]
fn gram_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.nbbg");
    let p = path.to_str().unwrap();

    let o = nyman(&["gram", "--L", "10", "--export", "csv", "--cache", p]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert!(csv.starts_with("l,m,value,error_bound,method\n"));
    assert_eq!(csv.lines().count(), 46);
    assert!(csv.lines().any(|l| l.starts_with("2,2,0.1732867951")));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("45 newly computed"));

    let again = nyman(&["gram", "--L", "10", "--cache", p]);
    assert_eq!(again.status.code(), Some(0));
    assert!(stdout(&again).starts_with("0 newly computed entries, 45 cached"));

    let grown = nyman(&["gram", "--L", "11", "--cache", p]);
    assert!(stdout(&grown).starts_with("10 newly computed entries, 55 cached"));

    let d = nyman(&["distance", "--L", "11", "--cache", p]);
    assert_eq!(d.status.code(), Some(0));
    assert_eq!(stdout(&d), stdout(&nyman(&["distance", "--L", "11"])));
}

#[test]
fn corrupted_cache_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.nbbg");
    let p = path.to_str().unwrap();
    assert_eq!(nyman(&["gram", "--L", "5", "--cache", p]).status.code(), Some(0));

    let mut bytes = fs::read(&path).unwrap();
    bytes[0] = b'X';
    fs::write(&path, &bytes).unwrap();
    let o = nyman(&["gram", "--L", "5", "--cache", p]);
    assert_eq!(o.status.code(), Some(65));
    assert!(!o.stderr.is_empty());

    fs::write(&path, b"NBBG").unwrap();
    assert_eq!(nyman(&["distance", "--L", "5", "--cache", p]).status.code(), Some(65));
}

#[test]
fn truncated_cache_does_not_mix_with_closed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.nbbg");
    let p = path.to_str().unwrap();
    assert_eq!(nyman(&["gram", "--L", "4", "--cache", p]).status.code(), Some(0));
    let o = nyman(&["gram", "--L", "4", "--truncation", "1000", "--cache", p]);
    assert_eq!(o.status.code(), Some(65));
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_nyman"))
            .args(args)
            .env("NYMAN_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run(&["gram", "--L", "6"]);
    assert!(stdout(&first).starts_with("15 newly computed"));
    assert!(dir.path().join("gram-harmonic-closed.nbbg").exists());
    assert!(stdout(&run(&["gram", "--L", "6"])).starts_with("0 newly computed"));
    run(&["gram", "--L", "3", "--truncation", "100"]);
    assert!(dir.path().join("gram-harmonic-truncated-100.nbbg").exists());
}

#[test]
fn truncated_distance_is_close() {
    let o = nyman(&["distance", "--L", "2", "--truncation", "1000000"]);
    let d2: f64 = rows(&o)[0][2].parse().unwrap();
    assert!((d2 - (1.0 - 2f64.ln())).abs() <= 1.0 / 1_000_001.0 + 1e-10);
}

#[test]
fn residual_at_two() {
    let o = nyman(&["residual", "--L", "2", "--eps", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let r: f64 = rows(&o)[0][2].parse().unwrap();
    let ln2 = 2f64.ln();
    assert!((r - (1.0 - ln2 + ln2 / 4.0)).abs() < 1e-12);
}
