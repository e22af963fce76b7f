//! Browser bindings: build a standard code, classify it, and look at its
//! q-system. Every export takes and returns JSON strings; failures come back
//! as `{"error": "..."}` so the page never has to catch exceptions.

use std::sync::Arc;

use rankgeo::classify::classify_report;
use rankgeo::constructions;
use rankgeo::io::{self, CodeDocument};
use rankgeo::{Budget, FieldTower, RankMetricCode};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Kept small so a click never freezes the tab for long.
const BUDGET: Budget = Budget(2_000_000);

fn respond(result: rankgeo::Result<Value>) -> String {
    let v = result.unwrap_or_else(|e| json!({"error": e.to_string()}));
    serde_json::to_string(&v).expect("values serialize")
}

fn load(code_json: &str) -> rankgeo::Result<RankMetricCode> {
    io::parse::<CodeDocument>(code_json)?.to_code()
}

/// Builds a "gabidulin", "pseudoregulus" or "near-mrd" code over F_{q^m}
/// and returns its document together with its classification.
pub fn construct_and_classify_impl(kind: &str, q: u32, m: u32, k: usize, n: usize) -> rankgeo::Result<Value> {
    let t = Arc::new(FieldTower::for_order(q, m)?);
    let code = match kind {
        "gabidulin" => constructions::gabidulin(t, n, k, None)?,
        "pseudoregulus" => constructions::pseudoregulus_system(t, k, BUDGET)?.code(),
        "near-mrd" => constructions::near_mrd_system(t, k, BUDGET)?.code(),
        other => return Err(rankgeo::Error::Precondition(format!("unknown construction {other:?}"))),
    };
    let report = classify_report(&code, BUDGET)?;
    Ok(json!({"code": CodeDocument::from_code(&code), "report": report, "table": report.to_table()}))
}

pub fn hyperplane_spectrum_impl(code_json: &str) -> rankgeo::Result<Value> {
    let code = load(code_json)?;
    let s = code.system()?.hyperplane_spectrum(BUDGET)?;
    Ok(json!({"n": code.n(), "max": s.max(), "min": s.min(), "histogram": s.histogram, "d": code.n() - s.max()}))
}

/// Largest intersection with an h-dimensional subspace for every h < k,
/// which decides (h,r)-evasiveness for all r at once.
pub fn evasive_table_impl(code_json: &str) -> rankgeo::Result<Value> {
    let code = load(code_json)?;
    let u = code.system()?;
    let mut rows = Vec::new();
    for h in 0..u.k() {
        let w = u.max_intersection(h, BUDGET)?;
        rows.push(json!({"h": h, "max_intersection": w.intersection_dim, "scattered": w.intersection_dim <= h}));
    }
    Ok(json!({"n": u.n(), "k": u.k(), "rows": rows}))
}

#[wasm_bindgen]
pub fn construct_and_classify(kind: &str, q: u32, m: u32, k: usize, n: usize) -> String {
    respond(construct_and_classify_impl(kind, q, m, k, n))
}

#[wasm_bindgen]
pub fn hyperplane_spectrum(code_json: &str) -> String {
    respond(hyperplane_spectrum_impl(code_json))
}

#[wasm_bindgen]
pub fn evasive_table(code_json: &str) -> String {
    respond(evasive_table_impl(code_json))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gabidulin_round_trip_through_json() {
        let out: Value = serde_json::from_str(&construct_and_classify("gabidulin", 2, 4, 2, 4)).unwrap();
        assert_eq!(out["report"]["flags"]["is_mrd"], json!(true));
        let code = serde_json::to_string(&out["code"]).unwrap();
        let s: Value = serde_json::from_str(&hyperplane_spectrum(&code)).unwrap();
        assert_eq!(s["d"], json!(3));
        assert_eq!(s["histogram"], json!({"0": 2, "1": 15}));
        let e: Value = serde_json::from_str(&evasive_table(&code)).unwrap();
        assert_eq!(e["rows"][1]["scattered"], json!(true));
    }

    #[test]
    fn near_mrd_is_flagged() {
        let out: Value = serde_json::from_str(&construct_and_classify("near-mrd", 2, 4, 3, 0)).unwrap();
        assert_eq!(out["report"]["flags"]["is_near_mrd"], json!(true));
    }

    #[test]
    fn errors_are_reported_as_json() {
        let out: Value = serde_json::from_str(&construct_and_classify("nonsense", 2, 3, 2, 3)).unwrap();
        assert!(out["error"].is_string());
        let out: Value = serde_json::from_str(&hyperplane_spectrum("{")).unwrap();
        assert!(out["error"].is_string());
    }
}
