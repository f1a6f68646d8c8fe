//! Browser bindings. Each export runs one command-line operation and
//! returns its JSON document as a string; failures come back as
//! `{"command": "error", "error": ...}` rather than as exceptions.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn call(args: Vec<String>) -> String {
    let argv = std::iter::once("p1dyn".to_string()).chain(args);
    let (code, out) = p1dyn::cli::run(argv);
    let mut doc: Value = serde_json::from_str(&out).unwrap_or_else(|_| {
        // clap usage errors are plain text
        json!({ "command": "error", "error": out.trim() })
    });
    if let Value::Object(m) = &mut doc {
        m.insert("exit_code".into(), code.into());
    }
    serde_json::to_string_pretty(&doc).expect("json")
}

/// Automorphism group of `map` (a rational function of `z`) over GF(q)
/// and its extensions.
#[wasm_bindgen]
pub fn aut(map: &str, q: u32) -> String {
    call(vec!["aut".into(), "--map".into(), map.into(), "--q".into(), q.to_string()])
}

/// Locus verdict for `(σ1, σ2)` mod `p`, or for a quadratic map when `map`
/// is nonempty.
#[wasm_bindgen]
pub fn locus(p: u32, sigma1: &str, sigma2: &str, map: &str) -> String {
    let mut args = vec!["locus".to_string(), "--p".into(), p.to_string()];
    if map.trim().is_empty() {
        args.extend(["--sigma1".into(), sigma1.into(), "--sigma2".into(), sigma2.into()]);
    } else {
        args.extend(["--map".into(), map.into()]);
    }
    call(args)
}

/// Runs a construction. `params` is whitespace-separated `key=value`
/// pairs, e.g. `p=7 n=4` or `q=3 a=1`.
#[wasm_bindgen]
pub fn construct(kind: &str, params: &str) -> String {
    let mut args = vec!["construct".to_string(), kind.to_string()];
    for kv in params.split_whitespace() {
        match kv.split_once('=') {
            Some((k, v)) => args.extend([format!("--{k}"), v.to_string()]),
            None => {
                return serde_json::to_string_pretty(&json!({
                    "command": "error",
                    "error": format!("expected key=value, got {kv}"),
                    "exit_code": 2,
                }))
                .expect("json")
            }
        }
    }
    call(args)
}
