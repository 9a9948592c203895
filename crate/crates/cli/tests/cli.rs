use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tripillai")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn cf_reports_legendre_constant() {
    let o = run(&["cf", "--mu", "log3/log2", "--M", "1e48", "--expect-a", "55"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("a(M) = 55"));
}

#[test]
fn wrong_expectation_is_a_claim_failure() {
    let o = run(&["cf", "--mu", "log3/log2", "--M", "1e48", "--expect-a", "54"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bad_input_is_a_config_error() {
    assert_eq!(run(&["cf", "--mu", "log1/log2"]).status.code(), Some(2));
    assert_eq!(run(&["padic", "--p", "5", "--d-max", "3"]).status.code(), Some(2));
    assert_eq!(run(&["search", "--bogus"]).status.code(), Some(2));
}

#[test]
fn periods_match_prediction() {
    let o = run(&["period", "--base", "2", "--k-max", "6", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let per: Vec<u64> = v["periods"].as_array().unwrap().iter().map(|r| r["period"].as_u64().unwrap()).collect();
    assert_eq!(per, [4, 8, 16, 32, 64, 128]);
}

#[test]
fn search_writes_report_table_and_records() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rep");
    let o = run(&[
        "search", "--n-max", "12", "--x-max", "10", "--y-max", "4", "--min-reps", "5", "--sign", "negative",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(out.join("search.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("c,reps,n,x,y"));
    assert_eq!(csv.lines().count(), 11);
    assert!(csv.contains("-8,5,12,9,0"));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("search.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    assert!(fs::read_to_string(out.join("search.txt")).unwrap().contains("classification PASS"));
}

#[test]
fn config_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# desk run\nn_max = 12\nx_max = 10\ny_max = 4\nmin_reps = 5\nsign = negative\nrecords = jsonl\nd_max = 7\n").unwrap();
    let out = dir.path().join("rep");
    let o = run(&["--config", cfg.to_str().unwrap(), "search", "--n-max", "5", "--out", out.to_str().unwrap()]);
    // with n <= 5 only c = -2 keeps five representations
    assert_eq!(o.status.code(), Some(0));
    let lines = fs::read_to_string(out.join("search.jsonl")).unwrap();
    assert_eq!(lines.lines().count(), 5);
    assert!(lines.lines().all(|l| l.contains("\"c\":\"-2\"")));
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "nonsense = 1\n").unwrap();
    assert_eq!(run(&["--config", cfg.to_str().unwrap(), "period"]).status.code(), Some(2));
}

#[test]
fn padic_small_range() {
    let o = run(&["padic", "--p", "2", "--d-max", "9", "--n-cap", "1.2e37", "--expect-at-most", "125", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let cap = v["primes"][0]["cap"].as_u64().unwrap();
    assert!((8..=125).contains(&cap), "{cap}");
}

#[test]
fn bounds_chain_passes() {
    let o = run(&["bounds", "--scenario", "negative"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("n_bound"));
}
