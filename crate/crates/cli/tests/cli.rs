use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hypermatch"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("HYPERMATCH_BUDGET").output().unwrap()
}

fn generate(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let p = path.to_str().unwrap().to_string();
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &p]);
    let out = run(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    p
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn generate_formats() {
    let dir = tempfile::tempdir().unwrap();
    let p = generate(dir.path(), "k9", &["complete", "--n", "9", "--k", "3"]);
    let text = std::fs::read_to_string(p).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("9 3"));
    assert_eq!(lines.count(), 84);

    let p = generate(dir.path(), "odd", &["parity-odd", "--n", "9", "--k", "3", "--x", "2"]);
    assert!(std::fs::read_to_string(p).unwrap().starts_with("9 3\n"));

    let p = generate(dir.path(), "kkm", &["kkm", "--n", "12"]);
    assert!(std::fs::read_to_string(p).unwrap().starts_with("12 4\n"));

    let out = run(&["generate", "space", "--n", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn decide_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let k9 = generate(dir.path(), "k9", &["complete", "--n", "9"]);
    let out = run(&["decide", &k9]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "yes");

    let space = generate(dir.path(), "space", &["space", "--n", "9", "--s", "2"]);
    let out = run(&["decide", &space, "--method", "slow"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("min codegree 2 < n/k = 9/3"));

    let out = run(&["decide", &space, "--method", "brute"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn all_methods_agree_on_parity_barrier() {
    let dir = tempfile::tempdir().unwrap();
    let p = generate(dir.path(), "odd", &["parity-odd", "--n", "12", "--x", "7"]);
    let out = run(&["decide", &p, "--method", "all", "--deterministic"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["verdict"], "no");
    assert_eq!(v["agree"], true);
    assert_eq!(v["results"].as_array().unwrap().len(), 3);
    assert!(v["disagreements"].as_array().unwrap().is_empty());
}

#[test]
fn all_reports_inapplicable_methods() {
    let dir = tempfile::tempdir().unwrap();
    // codegree 0, so only the oracle applies
    let p = generate(dir.path(), "odd", &["parity-odd", "--n", "9", "--x", "2"]);
    let out = run(&["decide", &p, "--method", "all"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["results"][0]["verdict"], "no");
    assert!(v["results"][1]["error"].as_str().unwrap().contains("codegree"));
}

#[test]
fn deterministic_reports_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let p = generate(dir.path(), "r", &["random", "--n", "12", "--seed", "5"]);
    let a = run(&["decide", &p, "--method", "all", "--deterministic"]);
    let b = run(&["decide", &p, "--method", "all", "--deterministic"]);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["config"]["pipeline"]["mu0"], serde_json::json!([1, 100]));
}

#[test]
fn config_flags_reach_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let p = generate(dir.path(), "k9", &["complete", "--n", "9"]);
    let out = run(&["decide", &p, "--gamma", "1/30", "--alpha", "0.02", "--t-cap", "1", "--validity-floor", "50"]);
    let v = json(&out);
    assert_eq!(v["config"]["pipeline"]["gamma"], serde_json::json!([1, 30]));
    assert_eq!(v["config"]["pipeline"]["alpha"], serde_json::json!([1, 50]));
    assert_eq!(v["config"]["pipeline"]["t_cap"], 1);
    assert_eq!(v["results"][0]["validity"], "asymptotic");

    let out = bin()
        .args(["decide", &p, "--method", "brute"])
        .env("HYPERMATCH_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["results"][0]["evidence"]["kind"], "budget_exhausted");
}

#[test]
fn analyze_reports_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let p = generate(dir.path(), "k9", &["complete", "--n", "9"]);
    let v = json(&run(&["analyze", &p]));
    assert_eq!(v["d_prime"], 1);
    assert_eq!(v["coset_order"], serde_json::json!({"finite": 1}));
    assert!(v["pipeline"]["merge_trace"].is_array());

    let p = generate(dir.path(), "even", &["parity-even", "--n", "12", "--x", "5"]);
    let v = json(&run(&["analyze", &p]));
    assert_eq!(v["d_prime"], 2);
    assert_eq!(v["coset_order"], serde_json::json!({"finite": 2}));
    assert_eq!(v["full_pair"], true);
}

#[test]
fn bench_csv() {
    let out = run(&["bench", "--suite", "quick", "--deterministic"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("instance,n,k,method,time,nodes,verdict"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5 * 3);
    assert!(rows.iter().any(|r| r.starts_with("\"complete(9,3)\"") && r.ends_with("yes")));
    // rows agree with decide
    let dir = tempfile::tempdir().unwrap();
    let p = generate(dir.path(), "space", &["space", "--n", "9", "--s", "2"]);
    let v = json(&run(&["decide", &p, "--method", "brute"]));
    assert_eq!(v["verdict"], "no");
    assert!(rows.iter().any(|r| r.starts_with("\"space(9,3,2)\"") && r.contains(",brute,") && r.ends_with(",no")));
}
