//! Browser bindings. Every call takes a pattern string and discovery bounds
//! and returns a JSON document; counts are encoded as decimal strings.

use serde_json::{json, Value};
use vinscheme::scheme::{discover_with_reverse, Variant};
use vinscheme::{discover, eval, DiscoveryParams, PatternSet, Scheme};
use wasm_bindgen::prelude::*;

/// Largest `n` the page may request.
pub const MAX_N: usize = 40;

fn find(patterns: &str, depth: usize, max_gap_norm: u32, try_reverse: bool) -> Result<(Variant, Scheme), String> {
    let b: PatternSet = patterns.parse().map_err(|e: vinscheme::Error| e.to_string())?;
    let params = DiscoveryParams::new(depth, max_gap_norm);
    if try_reverse {
        discover_with_reverse(&b, params).map_err(|e| e.to_string())
    } else {
        discover(&b, params)
            .map(|s| (Variant::Original, s))
            .map_err(|e| e.to_string())
    }
}

fn check_n(n: usize) -> Result<(), String> {
    if n > MAX_N {
        return Err(format!("n must be at most {MAX_N}"));
    }
    Ok(())
}

pub fn discover_doc(patterns: &str, depth: usize, max_gap_norm: u32, try_reverse: bool) -> Result<String, String> {
    let (variant, s) = find(patterns, depth, max_gap_norm, try_reverse)?;
    let triples: Vec<String> = s.triples().iter().map(|t| t.to_string()).collect();
    let scheme: Value = serde_json::to_value(&s).map_err(|e| e.to_string())?;
    Ok(json!({
        "variant": variant,
        "depth": s.depth(),
        "triples": triples,
        "scheme": scheme,
    })
    .to_string())
}

pub fn enumerate_doc(patterns: &str, n: usize, depth: usize, max_gap_norm: u32) -> Result<String, String> {
    check_n(n)?;
    let (variant, s) = find(patterns, depth, max_gap_norm, true)?;
    let seq: Vec<String> = eval::sequence(&s, n)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|c| c.to_string())
        .collect();
    Ok(json!({ "variant": variant, "sequence": seq }).to_string())
}

pub fn inversion_doc(patterns: &str, n: usize, depth: usize, max_gap_norm: u32) -> Result<String, String> {
    check_n(n)?;
    let (variant, s) = find(patterns, depth, max_gap_norm, true)?;
    let rows: Vec<Vec<String>> = eval::inversion_triangle_as(&s, variant, n)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|r| r.coefficients().iter().map(|c| c.to_string()).collect())
        .collect();
    Ok(json!({ "variant": variant, "rows": rows }).to_string())
}

#[wasm_bindgen(js_name = discoverScheme)]
pub fn discover_scheme(patterns: &str, depth: usize, max_gap_norm: u32, try_reverse: bool) -> Result<String, JsError> {
    discover_doc(patterns, depth, max_gap_norm, try_reverse).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn enumerate(patterns: &str, n: usize, depth: usize, max_gap_norm: u32) -> Result<String, JsError> {
    enumerate_doc(patterns, n, depth, max_gap_norm).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = inversionTriangle)]
pub fn inversion_triangle(patterns: &str, n: usize, depth: usize, max_gap_norm: u32) -> Result<String, JsError> {
    inversion_doc(patterns, n, depth, max_gap_norm).map_err(|e| JsError::new(&e))
}
