use serde_json::Value;

use greenmat_web::{eggbox_text, parse_matrix, rank_text, relate_text};

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn matrices_parse_from_lines_or_semicolons() {
    let a = parse_matrix("tropical", "0 -inf\n1/2, 3").unwrap();
    let b = parse_matrix("tropical", "0 -inf; 1/2 3").unwrap();
    assert_eq!(a, b);
    assert_eq!((a.rows(), a.cols()), (2, 2));
    assert!(parse_matrix("boolean", "1 0\n1").is_err());
    assert!(parse_matrix("boolean", "  \n").is_err());
    assert!(parse_matrix("integers", "1").is_err());
}

#[test]
fn relate_reports_a_witness() {
    let v = json(&relate_text("boolean", "L", "1 0\n0 1", "0 1\n1 0").unwrap());
    assert_eq!(v["related"], Value::Bool(true));
    assert!(v["witness"].is_object());
    let v = json(&relate_text("tropical", "H", "0 -inf\n-inf 0", "0 0\n0 1").unwrap());
    assert_eq!(v["related"], Value::Bool(false));
    assert!(v["witness"].is_null());
    assert!(relate_text("tropical", "D", "0", "0").is_err());
    assert!(relate_text("boolean", "Q", "1", "1").is_err());
}

#[test]
fn rank_of_a_full_support_tropical_matrix() {
    let v = json(&rank_text("tropical", "0 0\n0 1").unwrap());
    assert_eq!(v["rank"], 2);
    assert_eq!(v["method"], "TwoByTwoCriterion");
    let v = json(&rank_text("tropical", "0 0 0\n0 1 0\n0 0 2").unwrap());
    assert_eq!(v["rank"], "undetermined");
}

#[test]
fn eggbox_is_limited_to_small_n() {
    let v = json(&eggbox_text(2).unwrap());
    assert_eq!(v["n"], 2);
    assert!(eggbox_text(3).is_err());
}
