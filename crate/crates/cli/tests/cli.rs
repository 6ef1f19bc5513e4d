use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diffbase"))
        .args(args)
        .env("DIFFBASE_CACHE", cache)
        .env_remove("DIFFBASE_EXTENDED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn delta_reports_proved_value() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let o = run(&["delta", "--group", "C2^3"], &cache);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("delta: 5"), "{text}");
    assert!(text.contains("status: proved-optimal"));
    assert!(cache.exists());

    let o = run(&["--format", "json", "delta", "--group", "D10"], &cache);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["delta"], 5);
    assert_eq!(v["lb"], 5);
}

#[test]
fn emitted_certificate_verifies_and_tampering_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let cert = dir.path().join("cert.json");
    let o = run(&["delta", "--group", "C4xC4", "--emit-cert", cert.to_str().unwrap()], &cache);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["verify", cert.to_str().unwrap()], &cache);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    v["basis"].as_array_mut().unwrap().pop();
    std::fs::write(&cert, v.to_string()).unwrap();
    let o = run(&["verify", cert.to_str().unwrap()], &cache);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("missed"));
}

#[test]
fn exhausted_budget_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let o = run(&["--budget-ms", "1", "delta", "--group", "C2^6"], &cache);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("upper-only"));
}

#[test]
fn constructions_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let cases: [&[&str]; 6] = [
        &["quadratic", "--p", "5", "--k", "1", "--r", "1"],
        &["star-quadratic", "--p", "3", "--k", "1", "--r", "2"],
        &["diagonal-unit", "--p", "3", "--k", "2", "--r", "1"],
        &["singer", "--q", "4"],
        &["bose-chowla", "--q", "5"],
        &["recursive-p", "--group", "C3^2"],
    ];
    for (i, case) in cases.iter().enumerate() {
        let out = dir.path().join(format!("{i}.json"));
        let mut args = vec!["construct"];
        args.extend_from_slice(case);
        args.extend_from_slice(&["--out", out.to_str().unwrap()]);
        let o = run(&args, &cache);
        assert_eq!(o.status.code(), Some(0), "{case:?}: {}", String::from_utf8_lossy(&o.stderr));
        let o = run(&["verify", out.to_str().unwrap()], &cache);
        assert_eq!(o.status.code(), Some(0), "{case:?}");
    }
}

#[test]
fn interval_certificate_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let out = dir.path().join("z.json");
    let o = run(&["construct", "interval", "--n", "20", "--out", out.to_str().unwrap()], &cache);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["group"], "Z");
    let o = run(&["verify", out.to_str().unwrap()], &cache);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn precondition_failures_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    // q = 6 is not a prime power
    assert_eq!(run(&["construct", "singer", "--q", "6"], &cache).status.code(), Some(1));
    assert_eq!(run(&["construct", "recursive-p", "--group", "C6"], &cache).status.code(), Some(1));
    assert_eq!(run(&["delta", "--group", "C0"], &cache).status.code(), Some(1));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(run(&["verify", bad.to_str().unwrap()], &cache).status.code(), Some(1));
}

#[test]
fn table_csv_and_gating() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let o = run(&["--format", "csv", "table", "--noncyclic-abelian", "--max", "16"], &cache);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("group,order,lb,delta,characteristic,method,status"));
    let deltas: Vec<(&str, &str)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0], f[3])
        })
        .collect();
    assert_eq!(
        deltas,
        [
            ("C2^2", "3"),
            ("C2^3", "5"),
            ("C2xC4", "4"),
            ("C3^2", "4"),
            ("C2^2xC3", "5"),
            ("C2^4", "6"),
            ("C2^2xC4", "6"),
            ("C2xC8", "5"),
            ("C4^2", "6"),
        ]
    );
    assert_eq!(run(&["table", "--abelian", "--max", "60"], &cache).status.code(), Some(1));
}

#[test]
fn ring_check_matches() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let o = run(&["--format", "json", "ring-check", "--p", "3", "--k", "2", "--r", "1"], &cache);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["unit_match"], true);
}

#[test]
fn bounds_json_has_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let o = run(&["--format", "json", "bounds", "--group", "C2^4", "--effort", "formulas-only"], &cache);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let lower = v["record"]["lower"].as_u64().unwrap();
    let upper = v["record"]["upper"].as_u64().unwrap();
    assert!(lower <= 6 && 6 <= upper);
    assert!(!v["record"]["trace"].as_array().unwrap().is_empty());
    let cached: Value = serde_json::from_str(&std::fs::read_to_string(&cache).unwrap()).unwrap();
    assert!(cached.get("C2^4@formulas-only").is_some());
}
