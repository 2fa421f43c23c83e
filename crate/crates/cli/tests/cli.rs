use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_theta-bounds"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn orbit_of_one_sixth() {
    let o = run(&["orbit", "--alpha", "1/6", "--beta", "1/6"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("orbit size: 8"));
    assert!(s.contains("m1 = 1/6"));
    assert!(s.contains("classification: good"));
}

#[test]
fn orbit_json_for_trivial_and_bad_pairs() {
    let o = run(&["orbit", "--alpha", "0", "--beta", "0", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["size"], 1);
    assert_eq!(v["m1"], "0");
    assert_eq!(v["good"], false);
    let o = run(&["orbit", "--alpha", "1/2", "--beta", "1/3", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["good"], false);
}

#[test]
fn theta3_csv_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let svg = dir.path().join("a.svg");
    let args = |p: &std::path::Path| {
        vec![
            "theta3".to_string(),
            "--alpha".into(),
            "1/2".into(),
            "--beta".into(),
            "1/6".into(),
            "--eps".into(),
            "0.2,0.1".into(),
            "--x".into(),
            "0:4:101".into(),
            "--out".into(),
            p.display().to_string(),
        ]
    };
    let mut first = args(&a);
    first.extend(["--svg".into(), svg.display().to_string()]);
    assert!(run(&first.iter().map(String::as_str).collect::<Vec<_>>())
        .status
        .success());
    let second = args(&b);
    assert!(run(&second.iter().map(String::as_str).collect::<Vec<_>>())
        .status
        .success());
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let mut rdr = csv::Reader::from_path(&a).unwrap();
    assert_eq!(
        rdr.headers().unwrap(),
        vec!["x", "eps", "re", "im", "modulus", "scaled_modulus"]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 202);
    for r in &rows {
        let (eps, m, sm): (f64, f64, f64) = (r[1].parse().unwrap(), r[4].parse().unwrap(), r[5].parse().unwrap());
        assert!((sm - eps.powf(0.25) * m).abs() < 1e-15);
    }
    let svg = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);
}

#[test]
fn theta3_threads_do_not_change_output() {
    let args = [
        "theta3",
        "--alpha",
        "1/2",
        "--beta",
        "1/3",
        "--eps",
        "1e-4",
        "--x",
        "0.2:0.23:300",
    ];
    let one = Command::new(env!("CARGO_BIN_EXE_theta-bounds"))
        .args(args)
        .env("THETA_BOUNDS_THREADS", "1")
        .output()
        .unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_theta-bounds"))
        .args(args)
        .env("THETA_BOUNDS_THREADS", "4")
        .output()
        .unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn weylsum_prints_normalised_modulus() {
    let o = run(&[
        "weylsum",
        "--N",
        "20",
        "--x",
        "0.37",
        "--alpha-vec",
        "1/2",
        "--beta-vec",
        "1/6",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("N^(-k/2)|S| = "));
    let o = run(&[
        "weylsum",
        "--N",
        "20",
        "--x",
        "0.37",
        "--alpha-vec",
        "0.5,0.1",
        "--beta-vec",
        "0",
        "--cutoff",
        "sharp",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn constant_targets() {
    let o = run(&["constant", "--m", "1", "--target", "theta3"]);
    let s = stdout(&o);
    let eta: f64 = s
        .lines()
        .find_map(|l| l.strip_prefix("eta* = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((eta - 1.263).abs() < 0.005);
    assert!(s.contains("J2(1) = 1"));
    let o3 = run(&["constant", "--m", "3"]);
    assert!(stdout(&o3).contains("J2(3) = 8"));
    let c = |s: &str| -> f64 {
        s.lines()
            .find_map(|l| l.strip_prefix("constant = "))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!(c(&stdout(&o3)) > c(&s));
    let o = run(&["constant", "--m", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("odd"));
}

#[test]
fn verify_suites_and_exit_codes() {
    let o = run(&["verify", "--suite", "classify", "--qmax", "12", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["suite"], "classify");
    assert!(v["items"].as_array().unwrap().iter().all(|i| i["pass"] == true));
    assert_eq!(v["summary"]["pass"], true);
    let o = run(&["verify", "--suite", "sup", "--pair", "1/2,1/6", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["items"][0]["observed"]["verdict"], "bounded");
    let o = run(&["verify", "--suite", "sup", "--pair", "1/2,1/3", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["items"][0]["observed"]["verdict"], "growing");
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["orbit", "--alpha", "one", "--beta", "0"]).status.code(), Some(2));
    assert_eq!(
        run(&["theta3", "--alpha", "0", "--beta", "0", "--eps", "-1", "--x", "0:1:3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["theta3", "--alpha", "0", "--beta", "0", "--eps", "0.1", "--x", "0:1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&[]).status.code(), Some(2));
}
