use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_betajack")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn values(doc: &Value) -> Vec<String> {
    doc["results"].as_array().unwrap().iter().map(|r| r["value"].as_str().unwrap().to_string()).collect()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

#[test]
fn exact_moments() {
    let d = json(&["moments", "--ensemble", "laguerre", "--n", "3", "--alpha", "1", "--gamma", "0", "--k", "1"]);
    assert_eq!(values(&d), ["9"]);
    assert_eq!(d["command"], "moments");
    assert_eq!(d["ensemble"]["kind"], "laguerre");
    assert!(d["metadata"]["version"].is_string());
    assert!(d["metadata"].get("seed").is_none());

    let d = json(&["moments", "--ensemble", "gaussian", "--n", "5", "--alpha", "1", "--k", "3"]);
    assert_eq!(values(&d), ["0"]);
    let d = json(&["moments", "--ensemble", "gaussian", "--n", "2", "--alpha", "1", "--k-range", "1..4"]);
    assert_eq!(values(&d), ["0", "4", "0", "18"]);

    // β = 1 Laguerre, one eigenvalue: E x^{-1} = 1/γ.
    let d = json(&["moments", "--ensemble", "laguerre", "--n", "1", "--beta", "1", "--gamma", "5/2", "--k", "1", "--negative"]);
    assert_eq!(values(&d), ["2/5"]);
}

#[test]
fn exact_output_is_deterministic() {
    let args = ["moments", "--ensemble", "jacobi", "--n", "3", "--alpha", "1/2", "--gamma1", "1", "--gamma2", "1/3", "--k-range", "1..3", "--show-terms", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn alpha_and_beta_agree() {
    let a = json(&["moments", "--ensemble", "laguerre", "--n", "3", "--alpha", "1/2", "--gamma", "1", "--k-range", "1..3"]);
    let b = json(&["moments", "--ensemble", "laguerre", "--n", "3", "--beta", "4", "--gamma", "1", "--k-range", "1..3"]);
    assert_eq!(a, b);
}

#[test]
fn joint_moment_and_terms() {
    // E p_1^2 for the GUE with N = 3 is N.
    let d = json(&["moments", "--ensemble", "gaussian", "--n", "3", "--alpha", "1", "--mu", "1,1"]);
    assert_eq!(values(&d), ["3"]);
    let d = json(&["moments", "--ensemble", "gaussian", "--n", "2", "--alpha", "1", "--k", "2", "--show-terms"]);
    let terms = d["results"][0]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
}

#[test]
fn secular_coefficients() {
    let d = json(&["secular", "--ensemble", "gaussian", "--n", "4", "--alpha", "1", "--k-range", "0..3"]);
    assert_eq!(values(&d), ["1", "0", "-6", "0"]);
    let d = json(&["secular", "--ensemble", "gaussian", "--n", "2", "--alpha", "1", "--k", "3"]);
    assert_eq!(d["results"][0]["vanishes"], true);
}

fn terms(doc: &Value) -> Vec<(String, String)> {
    doc["results"]["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            let parts: Vec<String> = t["partition"].as_array().unwrap().iter().map(|p| p.to_string()).collect();
            (parts.join(","), t["coeff"].as_str().unwrap().to_string())
        })
        .collect()
}

#[test]
fn jack_expansions() {
    let d = json(&["jack", "--lambda", "1,1", "--alpha", "1", "--normalization", "J", "--basis", "powersum"]);
    let mut t = terms(&d);
    t.sort();
    assert_eq!(t, [("1,1".to_string(), "1".to_string()), ("2".to_string(), "-1".to_string())]);

    let d = json(&["jack", "--lambda", "1", "--alpha", "2", "--normalization", "C", "--basis", "powersum"]);
    assert_eq!(terms(&d), [("1".to_string(), "1".to_string())]);

    let out = run(&["jack", "--lambda", "1,1", "--alpha", "1", "--normalization", "J", "--basis", "powersum"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.split_whitespace().eq(["p(2)", "-1"])), "{text}");
}

#[test]
fn kappa_table_at_alpha_one() {
    let d = json(&["jack", "--kappa-table", "2", "--alpha", "1"]);
    let mut entries: Vec<String> = Vec::new();
    for row in d["results"]["entries"].as_array().unwrap() {
        for v in row.as_array().unwrap() {
            entries.push(v.as_str().unwrap().to_string());
        }
    }
    entries.sort();
    assert_eq!(entries, ["-1/2", "1/2", "1/2", "1/2"]);
}

#[test]
fn error_exit_codes() {
    assert_eq!(code(&["moments", "--ensemble", "gaussian", "--n", "3", "--alpha", "-1", "--k", "1"]), 2);
    assert_eq!(code(&["moments", "--ensemble", "laguerre", "--n", "3", "--alpha", "1", "--gamma", "-2", "--k", "1"]), 2);
    assert_eq!(code(&["moments", "--ensemble", "gaussian", "--n", "3", "--alpha", "1", "--k", "2", "--negative"]), 2);
    assert_eq!(code(&["moments", "--ensemble", "gaussian", "--n", "3", "--alpha", "1", "--beta", "2", "--k", "1"]), 2);
    assert_eq!(code(&["verify", "--suite", "nope"]), 2);
    assert_eq!(code(&["moments", "--ensemble", "gaussian", "--n", "3", "--alpha", "1", "--k", "40"]), 3);
    assert_eq!(code(&["jack", "--theta-table", "20", "--alpha", "1"]), 3);
    assert_eq!(code(&["compare", "--ensemble", "gaussian", "--n", "3", "--alpha", "1", "--targets", "sc5"]), 2);
}

#[test]
fn compare_passes() {
    let d = json(&["compare", "--ensemble", "gaussian", "--n", "4", "--alpha", "1", "--targets", "m2", "--steps", "50000"]);
    let row = &d["results"]["rows"][0];
    assert_eq!(row["exact"], "16");
    assert_eq!(row["flagged"], false);
    assert_eq!(d["metadata"]["seed"], 42);
    assert!(d["metadata"]["runtime_seconds"].is_number());

    let out = run(&[
        "compare", "--ensemble", "jacobi", "--n", "3", "--alpha", "2", "--gamma1", "1", "--gamma2", "1", "--targets", "m1,m2", "--steps", "50000",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn sample_csv_is_reproducible() {
    let args = ["sample", "--ensemble", "laguerre", "--n", "3", "--beta", "2", "--gamma", "1", "--steps", "50", "--burn-in", "100", "--seed", "7", "--format", "csv"];
    let a = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, run(&args).stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# laguerre"));
    assert_eq!(lines.next().unwrap(), "x1,x2,x3");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 100);
    for r in rows {
        let xs: Vec<f64> = r.split(',').map(|v| v.parse().unwrap()).collect();
        assert!(xs.len() == 3 && xs.iter().all(|&x| x > 0.0), "{r}");
    }
}

#[test]
fn sample_writes_output_file() {
    let path = std::env::temp_dir().join(format!("betajack-cli-{}.csv", std::process::id()));
    let p = path.to_str().unwrap();
    let d = json(&["sample", "--ensemble", "gaussian", "--n", "2", "--alpha", "1", "--steps", "2000", "--output", p, "--targets", "m2"]);
    assert_eq!(d["results"]["statistics"][0]["target"], "m2");
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(text.lines().count(), 2 + 4000);
}

#[test]
fn verify_suites() {
    for args in [
        vec!["verify", "--suite", "paper-moments"],
        vec!["verify", "--suite", "normalization", "--k-max", "6"],
        vec!["verify", "--suite", "hermite-routes", "--k-max", "6"],
        vec!["verify", "--suite", "transfer", "--k-max", "4", "--alpha-set", "1/3,2"],
    ] {
        let out = run(&args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    }
    let d = json(&["verify", "--suite", "epsilon", "--k-max", "3", "--alpha-set", "1"]);
    assert_eq!(d["results"][0]["suite"], "epsilon");
    assert_eq!(d["results"][0]["k_max"], 3);
}

#[test]
fn json_round_trips_through_the_core_types() {
    let d = json(&["moments", "--ensemble", "jacobi", "--n", "2", "--alpha", "3/2", "--gamma1", "0", "--gamma2", "1", "--k", "2"]);
    let spec: betajack::ensembles::EnsembleSpec = serde_json::from_value(d["ensemble"].clone()).unwrap();
    let v: betajack::Rational = serde_json::from_value(d["results"][0]["value"].clone()).unwrap();
    assert_eq!(betajack::ensembles::moment(2, &spec).unwrap().value, v);
}
