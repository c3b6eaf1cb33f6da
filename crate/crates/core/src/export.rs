//! JSON views of the main objects. Floats are written with 17 significant digits and complex
//! numbers as `[re, im]`.

use serde_json::{json, Number, Value};

use crate::error::Result;
use crate::gamma::GammaResult;
use crate::glgroup::FqMatrix;
use crate::levelzero::{Poly, RatFun};
use crate::linalg::{CMat, C64};
use crate::repcore::Rep;

/// `x` as a JSON number literal with 17 significant digits; non-finite values become `null`.
pub fn number(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    // Normalize −0 so that equal values print identically.
    let x = if x == 0.0 { 0.0 } else { x };
    let n: Number = serde_json::from_str(&format!("{x:.16e}")).expect("formatted float is valid JSON");
    Value::Number(n)
}

pub fn complex(z: C64) -> Value {
    Value::Array(vec![number(z.re), number(z.im)])
}

pub fn complex_matrix(m: &CMat) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| complex(m[(i, j)])).collect())).collect())
}

/// `{"n", "q", "rows"}`.
pub fn matrix(m: &FqMatrix) -> Value {
    json!({ "n": m.n(), "q": m.q(), "rows": m.rows() })
}

/// `{"n", "q", "dim", "generators": [{"element", "image"}]}` with images over a generating set.
pub fn rep(r: &Rep) -> Result<Value> {
    let generators: Vec<Value> = r
        .generator_images()?
        .iter()
        .map(|(g, img)| json!({ "element": matrix(g), "image": complex_matrix(img) }))
        .collect();
    Ok(json!({ "n": r.n(), "q": r.q(), "dim": r.dim(), "generators": generators }))
}

/// One row of a Bessel–Speh table.
pub fn bessel_row(g: &FqMatrix, value: C64) -> Value {
    json!({ "g": matrix(g), "value": complex(value) })
}

/// Identifies the pair `(τ, π)` behind a gamma factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairLabel {
    pub q: u32,
    pub k: usize,
    pub c: usize,
    pub tau_id: usize,
    pub pi_id: usize,
    pub exceptional: bool,
}

pub fn gamma_row(label: &PairLabel, g: &GammaResult) -> Value {
    json!({
        "q": label.q,
        "k": label.k,
        "c": label.c,
        "tau_id": label.tau_id,
        "pi_id": label.pi_id,
        "gamma_tilde": complex(g.gamma_tilde),
        "gamma": complex(g.gamma),
        "abs": number(g.gamma_tilde.norm()),
        "schur_residual": number(g.schur_residual),
        "exceptional": label.exceptional,
    })
}

fn poly(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(|&z| complex(z)).collect())
}

/// `{"numer", "denom", "variable"}` with coefficients from degree 0 upwards.
pub fn rational_function(r: &RatFun) -> Value {
    json!({ "numer": poly(r.numer()), "denom": poly(r.denom()), "variable": "X=u*q^{-cs}" })
}
