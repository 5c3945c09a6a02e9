//! JSON entry points for the static demo page in `www/`.
//!
//! Every export takes plain strings and returns a JSON document; errors come back as
//! `{"error": kind, "message": text}` so the page never has to catch.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use jolt_core::classify::{classify, ClassifyOptions};
use jolt_core::corpus;
use jolt_core::factorize::{jolt_factorize, time_one_map, Factorization};
use jolt_core::hamalg::{poisson, Hamiltonian};
use jolt_core::normalform::zeta_at;
use jolt_core::polycore::{format_vec, parse, FieldSpec};
use jolt_core::sampling::SampleBudget;
use jolt_core::{Error, Result};

fn field(radicand: u32) -> Result<FieldSpec> {
    if radicand == 0 {
        Ok(FieldSpec::Rational)
    } else {
        FieldSpec::sqrt(radicand)
    }
}

/// `corpus:<name>` or an expression in `q1..qn, p1..pn`.
pub fn hamiltonian(text: &str, n: usize, radicand: u32) -> Result<Hamiltonian> {
    if let Some(name) = text.trim().strip_prefix("corpus:") {
        return corpus::lookup(name).ok_or_else(|| Error::Precondition(format!("unknown corpus entry `{name}`")));
    }
    Hamiltonian::new(n, parse(text, n, field(radicand)?)?)
}

fn respond(r: Result<Value>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.kind(), "message": e.to_string() }).to_string(),
    }
}

pub fn classify_json(text: &str, n: usize, radicand: u32, seed: u64) -> String {
    respond((|| {
        let h = hamiltonian(text, n, radicand)?;
        let r = classify(&h, &ClassifyOptions { budget: SampleBudget::with_seed(seed), numeric: None })?;
        let mut v = serde_json::to_value(&r).expect("report serializes");
        v["hamiltonian"] = json!(h.poly().to_string());
        Ok(v)
    })())
}

/// ζ along the half circle `x = cos φ e_i + sin φ e_j`, and again at `2x`.
///
/// `i`, `j` index the `2n` phase coordinates (q first). Points where the `p-p` block is
/// singular are reported as `null`.
pub fn zeta_rays_json(text: &str, n: usize, radicand: u32, i: usize, j: usize, steps: usize) -> String {
    respond((|| {
        let h = hamiltonian(text, n, radicand)?.to_float();
        let dim = 2 * h.n();
        if i >= dim || j >= dim || i == j {
            return Err(Error::Precondition(format!("coordinates {i}, {j} out of range for 2n = {dim}")));
        }
        let steps = steps.clamp(8, 2000);
        let at = |phi: f64, scale: f64| -> Option<Vec<Vec<f64>>> {
            let mut x = vec![0.0; dim];
            x[i] = scale * phi.cos();
            x[j] = scale * phi.sin();
            let z = zeta_at(&h, &x, 1e-9).ok()?;
            Some((0..h.n()).map(|r| (0..h.n()).map(|c| *z.get(r, c)).collect()).collect())
        };
        let angles: Vec<f64> = (0..steps).map(|k| std::f64::consts::PI * (k as f64 + 0.5) / steps as f64).collect();
        let zeta: Vec<_> = angles.iter().map(|&a| at(a, 1.0)).collect();
        let scaled: Vec<_> = angles.iter().map(|&a| at(a, 2.0)).collect();
        let mut max_gap: f64 = 0.0;
        for (a, b) in zeta.iter().zip(&scaled) {
            if let (Some(a), Some(b)) = (a, b) {
                for (x, y) in a.iter().flatten().zip(b.iter().flatten()) {
                    max_gap = max_gap.max((x - y).abs());
                }
            }
        }
        Ok(json!({ "n": h.n(), "i": i, "j": j, "angles": angles, "zeta": zeta, "zeta_scaled": scaled, "max_scale_gap": max_gap }))
    })())
}

pub fn factorize_json(text: &str, n: usize, radicand: u32, seed: u64) -> String {
    respond((|| {
        let h = hamiltonian(text, n, radicand)?;
        let f = time_one_map(&h);
        let v = match jolt_factorize(&f, &SampleBudget::with_seed(seed))? {
            Factorization::Exact(j) => json!({
                "exact": true, "d": j.d, "h1": j.h1u.to_string(), "h4": j.h4u.to_string(),
                "h3": j.split.h3.to_string(), "f1": format_vec(&j.f1), "f4": format_vec(&j.f4),
                "residual": j.residual.to_string(),
            }),
            Factorization::Float(j) => json!({
                "exact": false, "d": j.d, "h1": j.h1u.to_string(), "h4": j.h4u.to_string(),
                "h3": j.split.h3.to_string(), "f1": format_vec(&j.f1), "f4": format_vec(&j.f4),
                "residual": j.residual.to_string(),
            }),
        };
        Ok(json!({ "map": format_vec(&f), "factorization": v }))
    })())
}

pub fn bracket_json(f: &str, g: &str, n: usize, radicand: u32) -> String {
    respond((|| {
        let k = field(radicand)?;
        let b = poisson(&parse(f, n, k)?, &parse(g, n, k)?)?;
        Ok(json!({ "bracket": b.to_string() }))
    })())
}

#[wasm_bindgen]
pub fn corpus_names() -> String {
    json!(corpus::names()).to_string()
}

#[wasm_bindgen(js_name = classify)]
pub fn classify_js(text: &str, n: usize, radicand: u32, seed: u32) -> String {
    classify_json(text, n, radicand, seed as u64)
}

#[wasm_bindgen(js_name = zetaRays)]
pub fn zeta_rays_js(text: &str, n: usize, radicand: u32, i: usize, j: usize, steps: usize) -> String {
    zeta_rays_json(text, n, radicand, i, j, steps)
}

#[wasm_bindgen(js_name = factorize)]
pub fn factorize_js(text: &str, n: usize, radicand: u32, seed: u32) -> String {
    factorize_json(text, n, radicand, seed as u64)
}

#[wasm_bindgen(js_name = bracket)]
pub fn bracket_js(f: &str, g: &str, n: usize, radicand: u32) -> String {
    bracket_json(f, g, n, radicand)
}
