//! WebAssembly bindings for the curvature explorer in `www/`.
//!
//! Every export works on `ch2(beta, gamma)` with the norm
//! `F² = |v|² + epsilon (|v_1|⁴ + |v_2|⁴)^{1/2}`; `epsilon = 0` is the flat
//! Hermitian norm.

use finsler_lie::algebra::{Builtin, ComplexifiedAlgebra};
use finsler_lie::classify::{classify, ClassifyOptions};
use finsler_lie::curvature::{bisectional, curvature_block, holomorphic_sectional};
use finsler_lie::linalg::{CMat, C64};
use finsler_lie::norm::{DiffConfig, NormSpec};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Grid and sample caps, so a slider drag cannot stall the page.
pub const MAX_STEPS: usize = 256;
pub const MAX_SAMPLES: usize = 64;

pub struct Setup {
    alg: ComplexifiedAlgebra,
    norm: NormSpec,
}

impl Setup {
    pub fn new(beta: f64, gamma: f64, epsilon: f64) -> Result<Self, String> {
        let alg = Builtin::Ch2 { beta, gamma }.build().map_err(|e| e.to_string())?;
        let norm = if epsilon == 0.0 {
            NormSpec::identity(2)
        } else {
            NormSpec::perturbed(CMat::identity(2), epsilon, 2).map_err(|e| e.to_string())?
        };
        Ok(Setup { alg, norm })
    }

    pub fn sectional(&self, v: &[C64]) -> Result<f64, String> {
        holomorphic_sectional(&self.alg, &self.norm, v, &DiffConfig::default())
            .map(|b| b.value)
            .map_err(|e| e.to_string())
    }

    pub fn bisectional(&self, v: &[C64], w: &[C64]) -> Result<f64, String> {
        bisectional(&self.alg, &self.norm, v, w, &DiffConfig::default())
            .map(|b| b.value)
            .map_err(|e| e.to_string())
    }
}

/// `(cos θ, e^{iφ} sin θ)`
pub fn direction(theta: f64, phase: f64) -> [C64; 2] {
    [C64::new(theta.cos(), 0.0), C64::from_polar(theta.sin(), phase)]
}

fn angles(steps: usize) -> Result<Vec<f64>, String> {
    if !(2..=MAX_STEPS).contains(&steps) {
        return Err(format!("steps must be between 2 and {MAX_STEPS}, got {steps}"));
    }
    Ok((0..steps)
        .map(|i| std::f64::consts::FRAC_PI_2 * i as f64 / (steps - 1) as f64)
        .collect())
}

/// `K(v(θ))` for `θ` evenly spaced in `[0, π/2]`.
pub fn profile(beta: f64, gamma: f64, epsilon: f64, phase: f64, steps: usize) -> Result<Vec<f64>, String> {
    let s = Setup::new(beta, gamma, epsilon)?;
    angles(steps)?
        .into_iter()
        .map(|t| s.sectional(&direction(t, phase)))
        .collect()
}

/// Row-major `B(v(θ_r), w(θ_c))` over the same angles, real directions.
pub fn grid(beta: f64, gamma: f64, epsilon: f64, steps: usize) -> Result<Vec<f64>, String> {
    let s = Setup::new(beta, gamma, epsilon)?;
    let ts = angles(steps)?;
    let mut out = Vec::with_capacity(steps * steps);
    for &a in &ts {
        // one curvature block per row
        let data =
            curvature_block(&s.alg, &s.norm, &direction(a, 0.0), &DiffConfig::default()).map_err(|e| e.to_string())?;
        for &b in &ts {
            out.push(data.bisectional(&direction(b, 0.0)).map_err(|e| e.to_string())?.value);
        }
    }
    Ok(out)
}

pub fn summary(beta: f64, gamma: f64, epsilon: f64, samples: usize) -> Result<String, String> {
    if !(1..=MAX_SAMPLES).contains(&samples) {
        return Err(format!("samples must be between 1 and {MAX_SAMPLES}, got {samples}"));
    }
    let s = Setup::new(beta, gamma, epsilon)?;
    let opts = ClassifyOptions {
        samples,
        ..ClassifyOptions::default()
    };
    let r = classify(&s.alg, &s.norm, &opts).map_err(|e| e.to_string())?;
    Ok(json!({
        "kahler": r.kahler,
        "weakly_kahler": r.weakly_kahler,
        "berwald": r.is_berwald,
        "kahler_residual": r.kahler_residual,
        "weakly_kahler_residual": r.weakly_kahler_residual,
        "berwald_residual": r.berwald_residual,
        "tol": r.tol,
    })
    .to_string())
}

fn js<T>(r: Result<T, String>) -> Result<T, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = curvatureProfile)]
pub fn curvature_profile(beta: f64, gamma: f64, epsilon: f64, phase: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    js(profile(beta, gamma, epsilon, phase, steps))
}

#[wasm_bindgen(js_name = bisectionalGrid)]
pub fn bisectional_grid(beta: f64, gamma: f64, epsilon: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    js(grid(beta, gamma, epsilon, steps))
}

/// JSON with the Kähler, weakly Kähler and Berwald verdicts and residuals.
#[wasm_bindgen(js_name = classifySummary)]
pub fn classify_summary(beta: f64, gamma: f64, epsilon: f64, samples: usize) -> Result<String, JsError> {
    js(summary(beta, gamma, epsilon, samples))
}
