//! Browser bindings: each entry point takes a CM-field (built-in name or
//! JSON) and returns a JSON report.

use cmforms::analytic::{class_polynomial, invariant_setup};
use cmforms::class_groups::{default_norm_bound, enumerate_ray_classes, verify_isomorphism, Enumeration};
use cmforms::error::{Error, Result};
use cmforms::ideals::DEFAULT_BUDGET;
use cmforms::mp::Ctx;
use cmforms::serial::{self, to_json, ClassGroupDoc, ComplexDoc, SiegelDoc};
use num_bigint::BigInt;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Levels above this are refused to keep the page responsive.
pub const MAX_LEVEL: u32 = 12;

fn check_level(n: u32) -> Result<u64> {
    if n == 0 || n > MAX_LEVEL {
        return Err(Error::Domain(format!("N = {n} must lie in 1..={MAX_LEVEL}")));
    }
    Ok(n as u64)
}

pub fn class_group_report(cm_field: &str, n: u32) -> Result<String> {
    let k = serial::parse_cm_field(cm_field)?;
    let n = check_level(n)?;
    let r = verify_isomorphism(&k, n, default_norm_bound(&k, n), DEFAULT_BUDGET)?;
    to_json(&ClassGroupDoc::from_report(&r))
}

#[derive(Serialize)]
struct CMPoint {
    class: usize,
    embedding: usize,
    #[serde(flatten)]
    z: ComplexDoc,
}

#[derive(Serialize)]
struct CMPoints {
    #[serde(rename = "N")]
    n: String,
    g: usize,
    points: Vec<CMPoint>,
}

/// `φᵢ(ξ)` for every ray class representative and every embedding.
pub fn cm_points_report(cm_field: &str, n: u32) -> Result<String> {
    let k = serial::parse_cm_field(cm_field)?;
    let n = check_level(n)?;
    let group = match enumerate_ray_classes(&k, n, default_norm_bound(&k, n), DEFAULT_BUDGET)? {
        Enumeration::Complete(g) => g,
        Enumeration::Incomplete { classes, expected } => {
            return Err(Error::Incomplete { found: classes.len(), expected: expected as usize })
        }
    };
    let mut ctx = Ctx::new(64)?;
    let nb = BigInt::from(n);
    let mut points = Vec::new();
    for (class, c) in group.reps().iter().enumerate() {
        let s = invariant_setup(c, &nb, &mut ctx)?;
        for (embedding, z) in s.cm_values.iter().enumerate() {
            points.push(CMPoint { class, embedding, z: ComplexDoc::new(z, &mut ctx) });
        }
    }
    to_json(&CMPoints { n: n.to_string(), g: k.g(), points })
}

pub fn siegel_report(cm_field: &str, n: u32, prec: u32) -> Result<String> {
    let k = serial::parse_cm_field(cm_field)?;
    let n = check_level(n)?;
    let mut ctx = Ctx::new(prec as usize)?;
    let p = class_polynomial(&k, n, default_norm_bound(&k, n), DEFAULT_BUDGET, &mut ctx)?;
    to_json(&SiegelDoc::new(&k, n, prec as usize, &p, &mut ctx))
}

fn js(r: Result<String>) -> std::result::Result<String, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = classGroup)]
pub fn class_group(cm_field: &str, n: u32) -> std::result::Result<String, JsError> {
    js(class_group_report(cm_field, n))
}

#[wasm_bindgen(js_name = cmPoints)]
pub fn cm_points(cm_field: &str, n: u32) -> std::result::Result<String, JsError> {
    js(cm_points_report(cm_field, n))
}

#[wasm_bindgen(js_name = siegelValues)]
pub fn siegel_values(cm_field: &str, n: u32, prec: u32) -> std::result::Result<String, JsError> {
    js(siegel_report(cm_field, n, prec))
}

#[wasm_bindgen(js_name = builtinFields)]
pub fn builtin_fields() -> Vec<String> {
    cmforms::catalog::names().iter().map(|s| s.to_string()).collect()
}
