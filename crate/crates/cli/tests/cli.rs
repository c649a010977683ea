use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use tempfile::TempDir;

use greenmat::verify::SuiteReport;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("greenmat").chain(args.iter().copied());
    let code = greenmat_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p
}

fn matrix(semifield: &str, entries: &[[&str; 2]; 2]) -> Value {
    json!({ "semifield": semifield, "rows": 2, "cols": 2, "entries": entries })
}

fn parse(out: &str) -> Value {
    serde_json::from_str(out).unwrap()
}

#[test]
fn zero_is_below_anything_for_leq_l() {
    let dir = TempDir::new().unwrap();
    let zero = write(dir.path(), "zero.json", &matrix("boolean", &[["0", "0"], ["0", "0"]]));
    let b = write(dir.path(), "b.json", &matrix("boolean", &[["1", "0"], ["1", "1"]]));
    let (code, out, _) = run(&["relate", "--rel", "leqL", zero.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(parse(&out), json!({ "related": true }));
    let (code, out, _) = run(&["relate", "--rel", "leqL", b.to_str().unwrap(), zero.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(parse(&out), json!({ "related": false }));
}

#[test]
fn relate_witness_is_opt_in() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.json", &matrix("boolean", &[["1", "0"], ["0", "0"]]));
    let b = write(dir.path(), "b.json", &matrix("boolean", &[["1", "1"], ["0", "0"]]));
    let (code, out, _) = run(&["relate", "--rel", "leqR", "--witness", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v = parse(&out);
    assert_eq!(v["related"], json!(true));
    assert!(v["witness"].is_object(), "{out}");
}

#[test]
fn tropical_rank_uses_the_two_by_two_criterion() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.json", &matrix("tropical", &[["0", "0"], ["0", "1"]]));
    let (code, out, _) = run(&["rank", a.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(parse(&out), json!({ "rank": 2, "method": "TwoByTwoCriterion" }));
}

#[test]
fn classify_reports_coefficients_that_are_not_rank_one() {
    let dir = TempDir::new().unwrap();
    let unit = |i: usize, j: usize, c: &str| {
        let mut e = [["-inf", "-inf"], ["-inf", "-inf"]];
        e[i][j] = c;
        matrix("tropical", &e)
    };
    let images = json!([unit(0, 0, "0"), unit(0, 1, "0"), unit(1, 0, "0"), unit(1, 1, "1")]);
    let t = write(dir.path(), "t.json", &json!({ "n": 2, "semifield": "tropical", "images": images }));
    let (code, out, _) = run(&["classify", t.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v = parse(&out);
    assert_eq!(v["n"], json!(2));
    assert!(v.get("non_canonical").is_some(), "{out}");

    let images = json!([unit(0, 0, "0"), unit(1, 0, "0"), unit(0, 1, "0"), unit(1, 1, "0")]);
    let t = write(dir.path(), "tr.json", &json!({ "n": 2, "semifield": "tropical", "images": images }));
    let (code, out, _) = run(&["classify", t.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(parse(&out)["canonical"]["transposed"], json!(true), "{out}");
}

#[test]
fn verify_t1_boolean_two() {
    let (code, out, _) = run(&["verify", "--suite", "t1", "--semifield", "boolean", "--n", "2"]);
    assert_eq!(code, 0);
    let r: SuiteReport = serde_json::from_str(&out).unwrap();
    assert!(r.pass);
    assert_eq!((r.counts.maps_enumerated, r.counts.preservers_found), (24, 4));
    assert_eq!(r.seed, None);
    let back = serde_json::to_string_pretty(&r).unwrap() + "\n";
    assert_eq!(back, out);
}

#[test]
fn randomized_runs_need_a_seed() {
    let (code, out, err) = run(&["verify", "--suite", "t1", "--semifield", "tropical", "--n", "2"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("--seed"), "{err}");
    let (code, _, _) = run(&["verify", "--suite", "t1", "--semifield", "boolean", "--n", "2", "--trials", "10"]);
    assert_eq!(code, 2);
}

#[test]
fn seeded_runs_are_byte_identical() {
    let args = ["verify", "--suite", "h_theorem", "--semifield", "tropical", "--n", "2", "--seed", "7", "--trials", "50"];
    let (c1, first, _) = run(&args);
    let (c2, second, _) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(first, second);
    let (_, single, _) = run(&[&args[..], &["--workers", "1"]].concat());
    assert_eq!(first, single);
    let r: SuiteReport = serde_json::from_str(&first).unwrap();
    assert_eq!(r.seed, Some(7));
    assert!(r.rng.is_some());
}

#[test]
fn usage_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.json");
    let bad = write(dir.path(), "bad.json", &json!({ "semifield": "boolean", "rows": 2, "cols": 2, "entries": [["1"]] }));
    for args in [
        vec!["rank", missing.to_str().unwrap()],
        vec!["rank", bad.to_str().unwrap()],
        vec!["verify", "--suite", "t9", "--semifield", "boolean", "--n", "2"],
        vec!["verify", "--suite", "t1", "--semifield", "reals", "--n", "2"],
        vec!["verify", "--suite", "t2", "--semifield", "boolean", "--n", "3"],
        vec!["eggbox", "--n", "4"],
        vec!["eggbox", "--n", "2", "--format", "svg"],
        vec!["frobnicate"],
    ] {
        let (code, _, err) = run(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn mixed_semifields_are_rejected() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.json", &matrix("boolean", &[["1", "0"], ["0", "1"]]));
    let b = write(dir.path(), "b.json", &matrix("tropical", &[["0", "0"], ["0", "0"]]));
    let (code, _, err) = run(&["relate", "--rel", "L", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));
}

#[test]
fn eggbox_json_and_dot() {
    let (code, out, _) = run(&["eggbox", "--n", "2"]);
    assert_eq!(code, 0);
    let v = parse(&out);
    let total: u64 = v["d_classes"].as_array().unwrap().iter().map(|d| d["size"].as_u64().unwrap()).sum();
    assert_eq!(total, 16);
    let (code, dot, _) = run(&["eggbox", "--n", "2", "--format", "dot"]);
    assert_eq!(code, 0);
    assert!(dot.starts_with("graph eggbox_2 {"));
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    for verb in ["relate", "rank", "classify", "verify", "eggbox"] {
        assert!(out.contains(verb), "{verb}");
    }
}
