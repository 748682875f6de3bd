use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kernelforge")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report on stdout")
}

fn value(report: &Value, i: usize) -> (f64, f64) {
    let v = &report["items"][i]["value"];
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

fn without_wall_time(out: &Output) -> Value {
    let mut v = json(out);
    v.as_object_mut().unwrap().remove("wall_time");
    v
}

#[test]
fn product_kernel_value() {
    let out = run(&["kernel", "--space", "bidisk", "--alpha", "0", "--beta", "0", "--theta", "0", "--vartheta", "0", "--pair", "0.3,0.2,0.1,0.4"]);
    assert_eq!(out.status.code(), Some(0));
    let (re, im) = value(&json(&out), 0);
    let expect = (1.0 - 0.03f64).powi(-2) * (1.0 - 0.08f64).powi(-2);
    assert!((re - expect).abs() < 1e-12 * expect && im == 0.0);
}

#[test]
fn fock_kernel_at_origin() {
    let out = run(&["kernel", "--space", "fock", "--alpha", "1", "--beta", "1", "--theta", "0", "--pair", "0,0,0,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!((value(&json(&out), 0).0 - 1.0).abs() < 1e-14);
}

#[test]
fn ball_kernel_against_oracle() {
    let out = run(&[
        "kernel", "--space", "ball", "--alpha", "0.5", "--beta", "1", "--theta", "0.7",
        "--pair", "0.3,0.2,0.1,0.4", "--pair", "0.2,0.1,-0.3,0.2,0.1,0.3,0.4,-0.1", "--oracle",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["pass"], true);
    for item in r["items"].as_array().unwrap() {
        assert!(item["rel_err"].as_f64().unwrap() <= 1e-6);
        assert!(item["terms_used"].as_u64().unwrap() > 0);
    }
}

#[test]
fn norm_expansion_examples() {
    let out = run(&["norm-expand", "--space", "bidisk", "--alpha", "0", "--beta", "0", "--poly", "z1 - z2", "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let items = r["items"].as_array().unwrap();
    let nonzero: Vec<&str> = items
        .iter()
        .filter(|i| i["item"].as_str().unwrap().starts_with("term") && value_of(i).abs() > 1e-14)
        .map(|i| i["item"].as_str().unwrap())
        .collect();
    assert_eq!(nonzero, ["term[1]"]);
    assert_eq!(r["pass"], true);

    let out = run(&["norm-expand", "--space", "fock", "--alpha", "1", "--beta", "1", "--poly", "1"]);
    let r = json(&out);
    assert!((value_of(r["items"].as_array().unwrap().last().unwrap()) - 1.0).abs() < 1e-14);

    let out = run(&["norm-expand", "--space", "ball", "--alpha", "0", "--beta", "0", "--poly", "z2", "--oracle"]);
    let r = json(&out);
    assert!((value_of(r["items"].as_array().unwrap().last().unwrap()) - 1.0 / 6.0).abs() < 1e-14);
    assert_eq!(r["pass"], true);
}

fn value_of(item: &Value) -> f64 {
    item["value"][0].as_f64().unwrap()
}

#[test]
fn sigma_examples() {
    for (args, expect) in [
        (&["--space", "bidisk", "--alpha", "0", "--beta", "0", "--theta", "0"][..], 1.0),
        (&["--space", "bidisk", "--alpha", "0", "--beta", "0", "--theta", "1"][..], 1.0),
        (&["--space", "fock", "--alpha", "1", "--beta", "1", "--theta", "1"][..], 0.5),
    ] {
        let mut a = vec!["sigma"];
        a.extend_from_slice(args);
        let out = run(&a);
        assert_eq!(out.status.code(), Some(0));
        let r = json(&out);
        assert!((value(&r, 0).0 - expect).abs() < 1e-13, "{args:?}");
        assert_eq!(r["pass"], true);
    }
}

#[test]
fn verify_suites() {
    for suite in ["bidisk-core", "fock-cov"] {
        let out = run(&["verify", suite, "--seed", "7"]);
        assert_eq!(out.status.code(), Some(0), "{suite}");
        assert_eq!(json(&out)["pass"], true);
    }
    let out = run(&["verify", "unknown"]);
    assert_eq!(out.status.code(), Some(64));
    assert!(out.stdout.is_empty());
}

#[test]
fn reports_are_deterministic() {
    let args = ["verify", "structure", "--seed", "3"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(without_wall_time(&a), without_wall_time(&b));
    let seq = run(&["verify", "structure", "--seed", "3", "--sequential"]);
    assert_eq!(json(&a)["items"], json(&seq)["items"]);
}

#[test]
fn exit_codes() {
    let domain = run(&["kernel", "--space", "ball", "--alpha", "0", "--beta", "0", "--pair", "0.9,0.9,0,0"]);
    assert_eq!(domain.status.code(), Some(2));
    let params = run(&["sigma", "--space", "fock", "--alpha", "-1", "--beta", "1"]);
    assert_eq!(params.status.code(), Some(2));
    let usage = run(&["kernel", "--space", "bidisk", "--alpha", "0", "--beta", "0", "--pair", "1,2,3"]);
    assert_eq!(usage.status.code(), Some(64));
    let missing = run(&["kernel", "--space", "bidisk", "--alpha", "0", "--beta", "0"]);
    assert_eq!(missing.status.code(), Some(64));
    let failing = run(&["kernel", "--space", "bidisk", "--alpha", "0", "--beta", "0", "--theta", "1", "--pair", "0.6,0.5,0.6,0.5", "--oracle", "--oracle-degree", "2"]);
    assert_eq!(failing.status.code(), Some(1));
    assert_eq!(json(&failing)["pass"], false);
}

#[test]
fn max_terms_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_kernelforge"))
        .args(["kernel", "--space", "bidisk", "--alpha", "0", "--beta", "0", "--theta", "1", "--pair", "0.9,0.2,0.8,0.4"])
        .env("KERNELFORGE_MAX_TERMS", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let bad = Command::new(env!("CARGO_BIN_EXE_kernelforge"))
        .args(["sigma", "--space", "bidisk", "--alpha", "0", "--beta", "0"])
        .env("KERNELFORGE_MAX_TERMS", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(64));
}

#[test]
fn csv_output() {
    let out = run(&["--format", "csv", "sigma", "--space", "fock", "--alpha", "1", "--beta", "1", "--theta", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("item,value_re,value_im,oracle_re,oracle_im,abs_err,rel_err"));
    assert_eq!(lines.next(), Some("sigma,0.5,0.0,0.5,0.0,0.0,0.0"));
    assert_eq!(lines.next(), Some("inverse_sigma,2.0,0.0,,,,"));
}

#[test]
fn inputs_from_files_and_gram_cache() {
    let dir = tempfile::tempdir().unwrap();
    let points = dir.path().join("pairs.txt");
    std::fs::write(&points, "# z1 z2 w1 w2\n0.3,0.2,0.1,0.4\n\n0.1 0 0.2 0 0 0.1 0.2 0.3\n").unwrap();
    let cache = dir.path().join("gram.json");
    let args = [
        "kernel", "--space", "bidisk", "--alpha", "0.5", "--beta", "1", "--theta", "2",
        "--points", points.to_str().unwrap(), "--oracle", "--gram-cache", cache.to_str().unwrap(),
    ];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(json(&first)["items"].as_array().unwrap().len(), 2);
    let cached: Value = serde_json::from_str(&std::fs::read_to_string(&cache).unwrap()).unwrap();
    assert_eq!(cached["max_degree"], 16);
    let second = run(&args);
    assert_eq!(without_wall_time(&first), without_wall_time(&second));

    let poly = dir.path().join("f.json");
    std::fs::write(&poly, "[[1,0,1.0,0.0],[0,1,-1.0,0.0]]").unwrap();
    let out = run(&["norm-expand", "--space", "bidisk", "--alpha", "0", "--beta", "0", "--poly-file", poly.to_str().unwrap(), "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pass"], true);

    std::fs::write(&cache, "not json").unwrap();
    assert_eq!(run(&args).status.code(), Some(74));
}
