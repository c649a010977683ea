//! Browser bindings for the demo page in `www/`.
//!
//! Matrices are typed as text, one row per line (or separated by `;`), entries
//! separated by spaces or commas. Every operation returns a JSON string; the
//! plain functions are usable natively and are what the tests exercise.

use serde_json::json;
use wasm_bindgen::prelude::*;

use greenmat::verify::{eggbox, EggBoxFormat};
use greenmat::{factor_rank, relate_with_witness, Error, GreenRelation, Matrix, SemifieldId};

/// Largest egg-box the page will draw; `n = 3` takes too long in a tab.
pub const MAX_PAGE_EGGBOX_N: usize = 2;

pub fn parse_matrix(semifield: &str, text: &str) -> Result<Matrix, String> {
    let sf = SemifieldId::from_name(semifield).map_err(|e| e.to_string())?;
    let rows: Vec<Vec<&str>> = text
        .split(['\n', ';'])
        .map(|line| line.split([' ', ',', '\t']).filter(|s| !s.is_empty()).collect::<Vec<_>>())
        .filter(|r| !r.is_empty())
        .collect();
    if rows.is_empty() {
        return Err("empty matrix".into());
    }
    let refs: Vec<&[&str]> = rows.iter().map(Vec::as_slice).collect();
    Matrix::parse(sf, &refs).map_err(|e| e.to_string())
}

pub fn relate_text(semifield: &str, rel: &str, a: &str, b: &str) -> Result<String, String> {
    let rel: GreenRelation = rel.parse().map_err(|e: Error| e.to_string())?;
    let a = parse_matrix(semifield, a)?;
    let b = parse_matrix(semifield, b)?;
    let found = relate_with_witness(&a, &b, rel).map_err(|e| e.to_string())?;
    Ok(json!({ "related": found.is_some(), "witness": found }).to_string())
}

pub fn rank_text(semifield: &str, a: &str) -> Result<String, String> {
    let a = parse_matrix(semifield, a)?;
    match factor_rank(&a) {
        Ok(r) => Ok(json!({ "rank": r.value, "method": r.method }).to_string()),
        Err(Error::RankUndetermined(_)) => Ok(json!({ "rank": "undetermined" }).to_string()),
        Err(e) => Err(e.to_string()),
    }
}

pub fn eggbox_text(n: usize) -> Result<String, String> {
    if n > MAX_PAGE_EGGBOX_N {
        return Err(format!("the page draws egg-boxes up to n = {MAX_PAGE_EGGBOX_N}"));
    }
    let e = eggbox(n).map_err(|e| e.to_string())?;
    Ok(e.render(EggBoxFormat::Json))
}

#[wasm_bindgen]
pub fn relate(semifield: &str, rel: &str, a: &str, b: &str) -> Result<String, JsValue> {
    relate_text(semifield, rel, a, b).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn rank(semifield: &str, a: &str) -> Result<String, JsValue> {
    rank_text(semifield, a).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = eggBox)]
pub fn egg_box(n: usize) -> Result<String, JsValue> {
    eggbox_text(n).map_err(|e| JsValue::from_str(&e))
}
