//! Browser bindings. Each export takes and returns JSON text; the `*_json`
//! functions hold the logic and run natively for tests.

use serde::Serialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use omrep::census::verify_nelson_chain;
use omrep::groundset::parse_key;
use omrep::io::{from_json, FamilyFile, RepresentationFile, WickFile};
use omrep::matroid::{is_orthogonal, twist};
use omrep::wick::{classify_wick, wick_from_representation, wick_support};

fn text(v: impl Serialize) -> Result<String, String> {
    serde_json::to_string_pretty(&v).map_err(|e| e.to_string())
}

fn msg(e: omrep::Error) -> String {
    e.to_string()
}

/// Principal Pfaffians of a skew matrix under a twist, with the support and
/// its classification.
pub fn pfaffian_vector_json(input: &str) -> Result<String, String> {
    let file: RepresentationFile = from_json(input).map_err(msg)?;
    let rep = file.to_representation().map_err(msg)?;
    let p = wick_from_representation(&rep, file.ring.partial_field().map_err(msg)?).map_err(msg)?;
    let support = wick_support(&p);
    text(json!({
        "vector": WickFile::from_vector(&p, file.ring),
        "support": FamilyFile::from_family(&support).bases,
        "label": classify_wick(&p).label,
        "orthogonal": is_orthogonal(&support).holds(),
    }))
}

/// Symmetric exchange check of a family and of its twist by `set`
/// (a key such as `1,3`; empty for no twist).
pub fn check_family_json(input: &str, set: &str) -> Result<String, String> {
    let family = from_json::<FamilyFile>(input).and_then(|f| f.to_family()).map_err(msg)?;
    let t = parse_key(family.ground(), set).map_err(msg)?;
    let twisted = twist(&family, t).map_err(msg)?;
    let report = |f: &omrep::matroid::BasisFamily| -> Value {
        let v = is_orthogonal(f);
        json!({ "bases": FamilyFile::from_family(f).bases, "orthogonal": v.holds(), "witness": v.witness })
    };
    text(json!({ "family": report(&family), "twisted": report(&twisted) }))
}

/// Summary of the counting-bound chain at `n`.
pub fn bound_chain_json(n: u32, precision: u32) -> Result<String, String> {
    let b = verify_nelson_chain(n as u64, precision).map_err(msg)?;
    text(json!({
        "n": b.n,
        "verdict": b.verdict,
        "log2_r": b.n * b.n * b.n,
        "lhs_upper_bound_bits": b.lhs_upper_bound_bits,
        "steps": b.steps,
    }))
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn pfaffian_vector(input: &str) -> Result<String, JsValue> {
    js(pfaffian_vector_json(input))
}

#[wasm_bindgen]
pub fn check_family(input: &str, set: &str) -> Result<String, JsValue> {
    js(check_family_json(input, set))
}

#[wasm_bindgen]
pub fn bound_chain(n: u32, precision: u32) -> Result<String, JsValue> {
    js(bound_chain_json(n, precision))
}
