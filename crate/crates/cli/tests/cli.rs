use std::fs;

use serde_json::Value;
use stabred_cli::{run, Outcome};

fn stabred(args: &[&str]) -> Outcome {
    run(std::iter::once("stabred").chain(args.iter().copied()))
}

fn report(o: &Outcome) -> Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("bad json {e}: {}", o.stdout))
}

const STAR: &str = r#"{
  "vertices": [
    {"kind": "root", "genus": 0},
    {"kind": "leaf", "genus": 0, "leaf": "prim"},
    {"kind": "leaf", "genus": 0, "leaf": "prim"},
    {"kind": "leaf", "genus": 0, "leaf": "prim"}
  ],
  "edges": [
    {"source": 0, "target": 1, "sigma": "1/3", "m": 3},
    {"source": 0, "target": 2, "sigma": "1/3", "m": 3},
    {"source": 0, "target": 3, "sigma": "SIGMA", "m": 3}
  ]
}"#;

#[test]
fn analyze_dessin_counts() {
    let o = stabred(&["analyze-dessin", "--p", "7", "--types", "2-3,2-3,7", "--n-prime", "2"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let r = report(&o);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["results"]["count"], 9);
    assert_eq!(r["results"]["N"], 6);
    assert_eq!(r["results"]["N_prime"], serde_json::json!([3]));
}

#[test]
fn genus_one_triple_fails() {
    let o = stabred(&["analyze-dessin", "--p", "3", "--types", "3,3,3"]);
    assert_eq!(o.code, 1);
    assert_eq!(report(&o)["status"], "fail");
}

#[test]
fn tree_check_star() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    let bad = dir.path().join("bad.json");
    fs::write(&good, STAR.replace("SIGMA", "1/3")).unwrap();
    fs::write(&bad, STAR.replace("SIGMA", "2/3")).unwrap();

    let o = stabred(&["tree-check", "--input", good.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert_eq!(report(&o)["results"]["structure"], "Star");

    let o = stabred(&["tree-check", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.code, 1);
    let r = report(&o);
    assert_eq!(r["results"]["valid"], false);
    let v = r["results"]["violations"].as_array().unwrap();
    assert_eq!(v.len(), 1);
    assert!(v[0].as_str().unwrap().contains("vertex 0"));
}

#[test]
fn malformed_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    fs::write(&path, "{\"vertices\": [\n  {\"kind\": \"root\",, }]}").unwrap();
    let o = stabred(&["tree-check", "--input", path.to_str().unwrap()]);
    assert_eq!(o.code, 2);
    assert!(o.stdout.is_empty());
    assert!(o.stderr.contains("line 2, column"), "{}", o.stderr);
}

#[test]
fn unknown_fields_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("extra.json");
    fs::write(&path, STAR.replace("SIGMA", "1/3").replace("\"vertices\"", "\"colour\": 1, \"vertices\"")).unwrap();
    assert_eq!(stabred(&["tree-check", "--input", path.to_str().unwrap()]).code, 2);
}

#[test]
fn bad_invocations_exit_two() {
    assert_eq!(stabred(&["frobnicate"]).code, 2);
    assert_eq!(stabred(&["analyze-dessin", "--p", "7"]).code, 2);
    assert_eq!(stabred(&["analyze-dessin", "--p", "7", "--types", "2-3,7"]).code, 2);
    assert_eq!(stabred(&["verify-datum", "--p", "7", "--sigma", "1/6,1/6,5/6"]).code, 2);
    assert_eq!(stabred(&["tree-check", "--input", "/nonexistent/tree.json"]).code, 2);
    assert_eq!(stabred(&["--help"]).code, 0);
}

#[test]
fn verify_datum_and_enumerate() {
    let o = stabred(&["verify-datum", "--p", "7", "--sigma", "1/6,1/6,2/3"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(report(&o)["status"], "pass");
    let o = stabred(&["enumerate-signatures", "--p", "5"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
}

#[test]
fn tail_normalize_both_inputs() {
    let mut coeffs = vec!["1", "3", "5"];
    coeffs.resize(24, "0");
    let coeffs = coeffs.join(",");
    let o = stabred(&["tail-normalize", "--p", "7", "--m", "6", "--a", "5", "--coeffs", &coeffs]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let flags = report(&o)["results"].clone();

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tail.json");
    fs::write(&path, format!("{{\"p\": 7, \"m\": 6, \"a\": 5, \"coeffs\": [{coeffs}]}}")).unwrap();
    let o = stabred(&["tail-normalize", "--input", path.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let r = report(&o);
    assert_eq!(r["results"], flags);
    assert_eq!(r["results"]["chain_verified"], true);
}

#[test]
fn germ_flips_at_threshold() {
    // threshold p m / ((p-1) h) = 5*2/(4*3) = 5/6
    let below = report(&stabred(&["germ-reduce", "--p", "5", "--m", "2", "--h", "3", "--ratio", "1/2"]));
    let above = report(&stabred(&["germ-reduce", "--p", "5", "--m", "2", "--h", "3", "--ratio", "1"]));
    assert_ne!(below["results"], above["results"]);
}

#[test]
fn output_is_deterministic() {
    let args = ["analyze-dessin", "--p", "7", "--types", "6,6,2-2", "--n-prime", "3", "--aut", "1,1,1|2"];
    let a = stabred(&args);
    let b = stabred(&args);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = stabred(&["--out", path.to_str().unwrap(), "verify-datum", "--p", "5", "--sigma", "1/2,1/4,1/4"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.is_empty());
    let r: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["command"], "verify-datum");
}
