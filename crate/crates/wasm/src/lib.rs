//! wasm-bindgen bindings for the browser demo in `www/`.
//!
//! Each exported function takes plain strings and numbers and returns a JSON
//! string, so the page needs no glue beyond `JSON.parse`. The `*_json`
//! functions are ordinary Rust and are what the tests exercise.

use num_rational::BigRational;
use qlc_core::criteria::{check_criterion, confirm_conclusion};
use qlc_core::seqprops::{self, PolySeq};
use qlc_core::triangles::{self, TriangleSpec, BUILTIN_NAMES};
use qlc_core::QPoly;
use serde::Serialize;
use serde_json::Value;
use wasm_bindgen::prelude::*;

const MAX_ROWS: u32 = 40;
const MAX_CRITERION_N: u32 = 30;

fn load_spec(source: &str) -> Result<TriangleSpec, String> {
    let source = source.trim();
    if source.starts_with('{') {
        serde_json::from_str(source).map_err(|e| format!("invalid spec: {e}"))
    } else {
        triangles::builtin(source).map_err(|e| e.to_string())
    }
}

fn parse_q(q: &str) -> Result<BigRational, String> {
    let q = q.trim();
    let parsed = if q.contains('/') {
        q.parse::<BigRational>().ok()
    } else {
        q.parse().ok().map(BigRational::from_integer)
    };
    parsed.ok_or_else(|| format!("invalid rational q {q:?}"))
}

#[derive(Serialize)]
struct TriangleView {
    name: String,
    rows: Vec<Vec<String>>,
    values: Vec<Vec<String>>,
    /// Strong q-log-concavity of each polynomial row.
    strong: Vec<bool>,
    /// Log-concavity of each row evaluated at q; `None` when a value is negative.
    log_concave_at_q: Vec<Option<bool>>,
}

/// Rows of a family (or JSON spec), their values at `q`, and per-row verdicts.
pub fn triangle_json(source: &str, rows: u32, q: &str) -> Result<String, String> {
    let spec = load_spec(source)?;
    let q0 = parse_q(q)?;
    let t = triangles::build(&spec, rows.clamp(1, MAX_ROWS) as usize).map_err(|e| e.to_string())?;
    let mut view = TriangleView {
        name: spec.name.clone(),
        rows: Vec::new(),
        values: Vec::new(),
        strong: Vec::new(),
        log_concave_at_q: Vec::new(),
    };
    for row in &t.rows {
        view.rows
            .push(row.0.iter().map(ToString::to_string).collect());
        let values = row.eval_at(&q0);
        view.values
            .push(values.iter().map(ToString::to_string).collect());
        view.strong.push(
            seqprops::is_strong_q_log_concave(row)
                .map(|r| r.holds)
                .unwrap_or(false),
        );
        view.log_concave_at_q
            .push(seqprops::is_log_concave(&values).ok().map(|r| r.holds));
    }
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

fn parse_poly_seq(input: &str) -> Result<PolySeq, String> {
    let value: Value = serde_json::from_str(input).map_err(|e| format!("invalid JSON: {e}"))?;
    let items = value.as_array().ok_or("expected a JSON array")?;
    items
        .iter()
        .map(|item| match item {
            Value::Array(_) => {
                serde_json::from_value::<QPoly>(item.clone()).map_err(|e| e.to_string())
            }
            Value::String(s) => qlc_core::CoeffExpr::parse(s)
                .map(|e| e.eval(0, 0))
                .map_err(|e| format!("{s:?}: {e}")),
            Value::Number(n) => n
                .as_i64()
                .map(QPoly::constant)
                .ok_or_else(|| format!("{n} is not an integer")),
            other => Err(format!("unsupported item {other}")),
        })
        .collect::<Result<Vec<_>, _>>()
        .map(PolySeq)
}

/// Runs one sequence property on a JSON array.
///
/// Items may be coefficient arrays (`["1","4","1"]`), polynomial strings in
/// `q` (`"q^2+4*q+1"`) or integers. Numeric properties evaluate at `q`.
pub fn check_json(property: &str, input: &str, q: &str) -> Result<String, String> {
    let seq = parse_poly_seq(input)?;
    let numeric = || -> Result<Vec<BigRational>, String> { Ok(seq.eval_at(&parse_q(q)?)) };
    let report = match property {
        "strong-q-log-concave" => seqprops::is_strong_q_log_concave(&seq),
        "q-log-concave" => seqprops::is_q_log_concave(&seq),
        "strong-q-log-convex" => seqprops::is_strong_q_log_convex(&seq),
        "log-concave" => seqprops::is_log_concave(&numeric()?),
        "log-convex" => seqprops::is_log_convex(&numeric()?),
        other => return Err(format!("unknown property {other:?}")),
    }
    .map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

/// Row criterion report plus the direct row check, up to `max_n`.
pub fn criterion_json(source: &str, max_n: u32) -> Result<String, String> {
    let spec = load_spec(source)?;
    let max_n = max_n.min(MAX_CRITERION_N) as usize;
    let criterion = check_criterion(&spec, max_n).map_err(|e| e.to_string())?;
    let conclusion = confirm_conclusion(&spec, max_n).map_err(|e| e.to_string())?;
    serde_json::to_string(&serde_json::json!({
        "criterion": criterion,
        "conclusion": conclusion,
    }))
    .map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn families() -> String {
    serde_json::to_string(&BUILTIN_NAMES).expect("static names serialize")
}

#[wasm_bindgen]
pub fn triangle(source: &str, rows: u32, q: &str) -> Result<String, JsValue> {
    triangle_json(source, rows, q).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn check(property: &str, input: &str, q: &str) -> Result<String, JsValue> {
    check_json(property, input, q).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn criterion(source: &str, max_n: u32) -> Result<String, JsValue> {
    criterion_json(source, max_n).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn triangle_view_for_eulerian() {
        let v = parse(&triangle_json("eulerian-poly", 4, "1").unwrap());
        assert_eq!(v["rows"][3][0], "q^2+4*q+1");
        assert_eq!(v["values"][3], serde_json::json!(["6", "18", "9", "1"]));
        assert!(v["strong"].as_array().unwrap().iter().all(|b| b == true));
        assert_eq!(v["log_concave_at_q"][3], true);
    }

    #[test]
    fn triangle_accepts_json_spec_and_fractional_q() {
        let spec = r#"{"name":"pascal","f":"1","g":"1","h":"0"}"#;
        let v = parse(&triangle_json(spec, 5, "1/2").unwrap());
        assert_eq!(v["name"], "pascal");
        assert_eq!(v["values"][4][2], "6");
        assert!(triangle_json("nope", 3, "1").is_err());
        assert!(triangle_json("motzkin", 3, "x").is_err());
    }

    #[test]
    fn negative_q_has_no_numeric_verdict() {
        let v = parse(&triangle_json("bell-poly", 4, "-1").unwrap());
        assert_eq!(v["values"][1][0], "-1");
        assert!(v["log_concave_at_q"][1].is_null());
    }

    #[test]
    fn check_accepts_mixed_item_forms() {
        let r = parse(
            &check_json(
                "strong-q-log-concave",
                r#"["q^3+3*q^2+q", ["1","5","3"], "3*q+2", 1]"#,
                "1",
            )
            .unwrap(),
        );
        assert_eq!(r["holds"], true);
        let r = parse(&check_json("log-concave", "[1, 1, 2]", "1").unwrap());
        assert_eq!(r["holds"], false);
        assert_eq!(r["witness"]["i"], 1);
        assert!(check_json("strong-q-log-concave", "[1, 0, 1]", "1").is_err());
        assert!(check_json("sorted", "[1]", "1").is_err());
    }

    #[test]
    fn criterion_for_bell_poly() {
        let v = parse(&criterion_json("bell-poly", 6).unwrap());
        assert_eq!(v["criterion"]["overall"], true);
        assert_eq!(v["conclusion"]["holds"], true);
        let v = parse(&criterion_json(r#"{"name":"v","f":"1","g":"1","h":"q^2"}"#, 4).unwrap());
        assert_eq!(v["criterion"]["conditions"]["gg-fh"]["holds"], false);
        assert_eq!(v["conclusion"]["holds"], false);
    }

    #[test]
    fn family_list() {
        let names: Vec<String> = serde_json::from_str(&families()).unwrap();
        assert_eq!(names.len(), 8);
    }
}
