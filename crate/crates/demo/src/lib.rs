//! Browser demo: three operations on a Hydra map given as a JSON map spec.
//!
//! Each operation has a plain Rust entry point returning a JSON string, so it
//! can be tested natively, and a thin `wasm_bindgen` export for the page.

use hydra_numen::dynamics::{orbit, OrbitStatus};
use hydra_numen::fourier::{charfn_solve, prob_inversion};
use hydra_numen::mapspec::parse_map_spec;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Keeps a page from asking for more than a browser tab can hold.
const MAX_ORBIT_STEPS: usize = 100_000;
const MAX_TABLE: u64 = 1 << 12;

fn table_size(q: u64, n: u32) -> Result<u64, String> {
    q.checked_pow(n)
        .filter(|&s| s <= MAX_TABLE)
        .ok_or_else(|| format!("{q}^{n} exceeds the demo limit of {MAX_TABLE} entries"))
}

fn render(v: Value) -> String {
    v.to_string()
}

/// `P(X_H = w mod q^n)` for every residue `w`.
pub fn distribution(map: &str, q: u64, n: u32) -> Result<String, String> {
    let h = parse_map_spec(map).map_err(|e| e.to_string())?;
    table_size(q, n)?;
    let d = prob_inversion(&h, q, n).map_err(|e| e.to_string())?;
    let rows: Vec<Value> = d
        .probabilities
        .iter()
        .map(|(w, p)| json!({ "w": w.to_string(), "p": p }))
        .collect();
    Ok(render(json!({ "q": q, "n": n, "b": d.b, "total": d.total(), "probabilities": rows })))
}

/// The characteristic function on every `|t|_q <= q^level`, as points in the unit disk.
pub fn charfn(map: &str, q: u64, level: u32) -> Result<String, String> {
    let h = parse_map_spec(map).map_err(|e| e.to_string())?;
    table_size(q, level)?;
    let table = charfn_solve(&h, q, level).map_err(|e| e.to_string())?;
    let rows: Vec<Value> = table
        .values
        .iter()
        .map(|(t, v)| json!({ "t": t.to_string(), "level": t.level(), "re": v.re, "im": v.im }))
        .collect();
    Ok(render(json!({ "q": q, "level": level, "values": rows })))
}

/// Forward orbit of `start`, with its cycle if one is reached.
pub fn orbit_path(map: &str, start: &str, max_steps: usize) -> Result<String, String> {
    let h = parse_map_spec(map).map_err(|e| e.to_string())?;
    let x = start.trim().parse().map_err(|_| format!("start must be an integer, got {start:?}"))?;
    let rep = orbit(&h, &x, max_steps.min(MAX_ORBIT_STEPS), 1e18);
    let strs = |v: &[num_bigint::BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let status = match rep.status {
        OrbitStatus::Periodic => "periodic",
        OrbitStatus::Preperiodic => "preperiodic",
        OrbitStatus::Escaped { .. } => "escaped",
    };
    Ok(render(json!({
        "start": rep.start.to_string(),
        "tail": strs(&rep.tail),
        "cycle": strs(&rep.cycle),
        "entry": rep.entry.map(|e| e.to_string()),
        "status": status,
    })))
}

#[wasm_bindgen(js_name = distribution)]
pub fn distribution_js(map: &str, q: u32, n: u32) -> Result<String, JsError> {
    distribution(map, q as u64, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = charfn)]
pub fn charfn_js(map: &str, q: u32, level: u32) -> Result<String, JsError> {
    charfn(map, q as u64, level).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = orbit)]
pub fn orbit_js(map: &str, start: &str, max_steps: u32) -> Result<String, JsError> {
    orbit_path(map, start, max_steps as usize).map_err(|e| JsError::new(&e))
}
