//! The subcommands. Each returns a payload, residual rows and an exit code.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use log::{debug, info};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::report::{Residual, Status};
use super::source::{complex_algebra, digest_arg, load_algebra, load_norm, parse_vector, AlgebraInput, InputDigest};
use super::RunConfig;
use crate::algebra::io::{algebra_to_json, AlgebraJson};
use crate::algebra::{complexify, nijenhuis, validate_real, ComplexifiedAlgebra, RealLieAlgebra, INTEGRABILITY_TOL};
use crate::classify::{classify, verify_complex_group_theorems, BISECTIONAL_TOL};
use crate::connection::nonlinear_connection;
use crate::curvature::{curvature_block, curvature_operator_coordinate_free, relative_difference};
use crate::error::{Error, Result};
use crate::json::ComplexJson;
use crate::linalg::C64;
use crate::norm::{euler_residuals, NormSpec};
use crate::sampling::unit_sphere;

/// Agreement bound between the coordinate-free and index curvature operators.
pub const OPERATOR_TOL: f64 = 1e-7;

pub struct Outcome {
    pub inputs: Vec<InputDigest>,
    pub payload: Value,
    pub residuals: Vec<Residual>,
    pub code: i32,
    /// Printed to stderr.
    pub message: Option<String>,
}

impl Outcome {
    pub fn status(&self) -> Status {
        if self.code == 0 && self.residuals.iter().all(|r| r.pass != Some(false)) {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

fn cvec(v: &[C64]) -> Value {
    serde_json::to_value(v.iter().copied().map(ComplexJson::from).collect::<Vec<_>>()).expect("vector serializes")
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("payload serializes")
}

fn failing(residuals: &[Residual]) -> Vec<&str> {
    residuals
        .iter()
        .filter(|r| r.pass == Some(false))
        .map(|r| r.name.as_str())
        .collect()
}

/// Largest `|c^k_{ij} + c^k_{ji}|`, named with 1-based indices.
fn worst_antisymmetry(alg: &RealLieAlgebra) -> Option<String> {
    let d = alg.dim();
    let mut best: Option<(f64, usize, usize, usize)> = None;
    for k in 0..d {
        for i in 0..d {
            for j in i..d {
                let s = (alg.c(k, i, j) + alg.c(k, j, i)).abs();
                if s > 0.0 && best.is_none_or(|b| s > b.0) {
                    best = Some((s, k, i, j));
                }
            }
        }
    }
    best.map(|(s, k, i, j)| {
        format!(
            "c^{k}_{{{i}{j}}} + c^{k}_{{{j}{i}}} = {s}",
            k = k + 1,
            i = i + 1,
            j = j + 1
        )
    })
}

pub fn validate(cfg: &RunConfig, arg: &str) -> Result<Outcome> {
    let (input, digest) = load_algebra(arg)?;
    let tol = cfg.tol_structural;
    let (payload, residuals, detail) = match input {
        AlgebraInput::Real(f) => {
            let rep = validate_real(&f.algebra);
            let mut residuals = vec![
                Residual::check("antisymmetry", rep.antisymmetry_residual, tol),
                Residual::check("jacobi", rep.jacobi_residual, tol),
            ];
            let structure = match &f.complex_structure {
                Some(acs) => {
                    let nij = nijenhuis(&f.algebra, acs)?;
                    residuals.push(Residual::info("nijenhuis", nij.max_abs));
                    json!({
                        "integrable": nij.integrable,
                        "nijenhuis_max": nij.max_abs,
                        "worst_pair": [nij.worst_pair.0 + 1, nij.worst_pair.1 + 1],
                    })
                }
                None => Value::Null,
            };
            let payload = json!({
                "kind": "real",
                "dim": f.algebra.dim(),
                "antisymmetry_residual": rep.antisymmetry_residual,
                "jacobi_residual": rep.jacobi_residual,
                "complex_structure": structure,
            });
            let detail = if rep.antisymmetry_residual >= tol {
                worst_antisymmetry(&f.algebra)
            } else {
                None
            };
            (payload, residuals, detail)
        }
        AlgebraInput::Complex(alg) => {
            let rep = alg.validate();
            let residuals = vec![
                Residual::check("antisymmetry", rep.antisymmetry_residual, tol),
                Residual::check("conjugation", rep.conjugation_residual, tol),
                Residual::check("jacobi", rep.jacobi_residual, tol),
            ];
            let payload = json!({
                "kind": "complex",
                "n": alg.dim(),
                "antisymmetry_residual": rep.antisymmetry_residual,
                "conjugation_residual": rep.conjugation_residual,
                "jacobi_residual": rep.jacobi_residual,
                "is_complex_group_type": alg.is_complex_group_type().0,
                "is_abelian": alg.is_abelian(),
            });
            (payload, residuals, None)
        }
    };
    let bad = failing(&residuals);
    let (code, message) = if bad.is_empty() {
        (0, None)
    } else {
        let mut m = format!("validation failed: {}", bad.join(", "));
        if let Some(d) = detail {
            m.push_str(&format!(" ({d})"));
        }
        (3, Some(m))
    };
    Ok(Outcome {
        inputs: vec![digest],
        payload,
        residuals,
        code,
        message,
    })
}

pub fn complexify_cmd(cfg: &RunConfig, arg: &str, weights: Option<&[f64]>, output: Option<&Path>) -> Result<Outcome> {
    let (input, digest) = load_algebra(arg)?;
    let AlgebraInput::Real(file) = input else {
        return Err(Error::Input(format!(
            "{arg} is already complexified; complexify needs a real algebra with \"dim\" and \"I\""
        )));
    };
    let acs = file
        .complex_structure
        .as_ref()
        .ok_or_else(|| Error::Input("real algebra has no complex structure \"I\"".into()))?;
    let rep = validate_real(&file.algebra);
    if !rep.pass {
        return validate(cfg, arg);
    }
    let nij = nijenhuis(&file.algebra, acs)?;
    debug!("nijenhuis max {:.3e} at {:?}", nij.max_abs, nij.worst_pair);
    let weights = weights.or(file.weights.as_deref());
    let alg = complexify(&file.algebra, acs, weights)?;
    if let Some(path) = output {
        fs::write(path, algebra_to_json(&alg) + "\n").map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        info!("wrote {}", path.display());
    }
    let crep = alg.validate();
    let tol = cfg.tol_structural;
    let residuals = vec![
        Residual::check("real_antisymmetry", rep.antisymmetry_residual, tol),
        Residual::check("real_jacobi", rep.jacobi_residual, tol),
        Residual::check("nijenhuis", nij.max_abs, INTEGRABILITY_TOL),
        Residual::check("complex_conjugation", crep.conjugation_residual, tol),
        Residual::check("complex_jacobi", crep.jacobi_residual, tol),
    ];
    Ok(Outcome {
        inputs: vec![digest],
        payload: json!({
            "real_dim": file.algebra.dim(),
            "n": alg.dim(),
            "weights": weights,
            "is_complex_group_type": alg.is_complex_group_type().0,
            "algebra": to_value(&AlgebraJson::from_algebra(&alg)),
        }),
        residuals,
        code: 0,
        message: None,
    })
}

fn load_pair(algebra: &str, norm: &str) -> Result<(ComplexifiedAlgebra, NormSpec, Vec<InputDigest>)> {
    let (input, da) = load_algebra(algebra)?;
    let alg = complex_algebra(input)?;
    let (norm, dn) = load_norm(norm, alg.dim())?;
    Ok((alg, norm, vec![da, dn]))
}

fn direction(s: &str, n: usize, flag: &str) -> Result<Vec<C64>> {
    let v = parse_vector(s)?;
    if v.len() != n {
        return Err(Error::Input(format!(
            "{flag} has {} components, algebra has dimension {n}",
            v.len()
        )));
    }
    Ok(v)
}

pub fn curvature(cfg: &RunConfig, algebra: &str, norm_arg: &str, v: &str, w: Option<&str>) -> Result<Outcome> {
    let (alg, norm, inputs) = load_pair(algebra, norm_arg)?;
    let n = alg.dim();
    let v = direction(v, n, "--v")?;
    if v.iter().all(|z| z.norm_sqr() == 0.0) {
        return Err(Error::ZeroDirection);
    }
    let w = w.map(|w| direction(w, n, "--w")).transpose()?;
    let diff = cfg.diff_config();
    let data = curvature_block(&alg, &norm, &v, &diff)?;
    let k = data.holomorphic_sectional();
    let b = w.as_ref().map(|w| data.bisectional(w)).transpose()?;
    let probe = w.clone().unwrap_or_else(|| v.clone());
    let index = data.apply(&probe);
    let free = curvature_operator_coordinate_free(&alg, &norm, &v, &probe, &diff)?;
    let agreement = relative_difference(&free, &index);
    let (_, _, n_residual) = nonlinear_connection(&alg, &data.jet)?;
    let euler = euler_residuals(&data.jet);
    let imag = b.map_or(k.imaginary_residue, |b| b.imaginary_residue.max(k.imaginary_residue));
    let tol_jet = cfg.tol_jet(&norm);
    let residuals = vec![
        Residual::check("operator_index_agreement", agreement, OPERATOR_TOL),
        Residual::check("imaginary_residue", imag, tol_jet),
        Residual::check("euler", euler.max(), tol_jet),
        Residual::info("g_inverse", data.jet.inverse_residual),
        Residual::info("n_system", n_residual),
    ];
    let payload = json!({
        "n": n,
        "norm": norm.kind_name(),
        "mode": data.mode,
        "v": cvec(&v),
        "w": w.as_deref().map(cvec),
        "holomorphic_sectional": k,
        "bisectional": b,
        "curvature_operator": { "w": cvec(&probe), "index": cvec(&index), "coordinate_free": cvec(&free) },
        "min_eigenvalue": data.jet.min_eigenvalue,
        "n_hol": to_value(&data)["n_hol"].clone(),
        "r_block": to_value(&data)["r_block"].clone(),
    });
    Ok(Outcome {
        inputs,
        payload,
        residuals,
        code: 0,
        message: None,
    })
}

pub fn classify_cmd(cfg: &RunConfig, algebra: &str, norm_arg: &str) -> Result<Outcome> {
    let (alg, norm, inputs) = load_pair(algebra, norm_arg)?;
    let opts = cfg.classify_options();
    let rep = classify(&alg, &norm, &opts)?;
    let tol = opts.tol;
    let residuals = vec![
        Residual::threshold("kahler", rep.kahler_residual, tol),
        Residual::threshold("weakly_kahler", rep.weakly_kahler_residual, tol),
        Residual::threshold("berwald", rep.berwald_residual, tol),
        Residual::info("bisectional_max", rep.bisectional_max),
    ];
    let inv = rep.invariants;
    let ok = inv.kahler_implies_weakly && inv.complex_group_rigidity && inv.kahler_iff_abelian;
    let verdict = match (rep.kahler, rep.weakly_kahler, rep.is_berwald) {
        (true, _, true) => "kahler-berwald",
        (true, _, false) => "kahler",
        (false, true, true) => "weakly-kahler berwald",
        (false, true, false) => "weakly-kahler",
        (false, false, true) => "berwald",
        (false, false, false) => "none",
    };
    Ok(Outcome {
        inputs,
        payload: json!({ "verdict": verdict, "norm": norm.kind_name(), "report": to_value(&rep) }),
        residuals,
        code: if ok { 0 } else { 1 },
        message: (!ok).then(|| format!("classification invariant violated: {inv:?}")),
    })
}

pub fn verify_theorems(cfg: &RunConfig, algebra: &str, norm_arg: &str) -> Result<Outcome> {
    let (alg, norm, inputs) = load_pair(algebra, norm_arg)?;
    let opts = cfg.classify_options();
    let rep = verify_complex_group_theorems(&alg, &norm, &opts)?;
    let tol = opts.tol;
    let residuals = vec![
        Residual::check("gamma_max", rep.gamma_max, tol),
        Residual::check("bisectional_max", rep.bisectional_max, BISECTIONAL_TOL),
        Residual::check(
            "torsion_vs_minus_half_lambda",
            rep.torsion_vs_minus_half_lambda_residual,
            tol,
        ),
        Residual::check("berwald", rep.berwald_residual, tol),
        Residual::info("kahler", rep.kahler_residual),
    ];
    let pass = rep.pass;
    Ok(Outcome {
        inputs,
        payload: json!({ "norm": norm.kind_name(), "report": to_value(&rep) }),
        residuals,
        code: if pass { 0 } else { 1 },
        message: (!pass).then(|| "theorem check failed".to_string()),
    })
}

/// `key=v1,v2,...` axes; several axes may be joined with `;`.
pub fn parse_grid(specs: &[String]) -> Result<Vec<(String, Vec<f64>)>> {
    let mut axes: Vec<(String, Vec<f64>)> = Vec::new();
    for part in specs
        .iter()
        .flat_map(|s| s.split(';'))
        .map(str::trim)
        .filter(|p| !p.is_empty())
    {
        let (key, values) = part
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("grid axis '{part}' is not key=v1,v2,...")))?;
        let key = key.trim().to_string();
        if axes.iter().any(|(k, _)| *k == key) {
            return Err(Error::Input(format!("grid axis '{key}' given twice")));
        }
        let values = super::source::parse_reals(values).map_err(|e| Error::Input(format!("grid axis '{key}': {e}")))?;
        axes.push((key, values));
    }
    if axes.is_empty() {
        return Err(Error::Input("grid is empty".into()));
    }
    Ok(axes)
}

/// Cartesian product, last axis fastest.
fn grid_points(axes: &[(String, Vec<f64>)]) -> Vec<Vec<(String, f64)>> {
    let mut points = vec![Vec::new()];
    for (key, values) in axes {
        points = points
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |&x| {
                    let mut q = p.clone();
                    q.push((key.clone(), x));
                    q
                })
            })
            .collect();
    }
    points
}

fn substitute(template: &str, point: &[(String, f64)]) -> String {
    point.iter().fold(template.to_string(), |s, (k, x)| {
        s.replace(&format!("{{{k}}}"), &x.to_string())
    })
}

#[derive(Debug, Serialize)]
pub struct SweepRow {
    pub params: BTreeMap<String, f64>,
    pub algebra: String,
    pub norm: String,
    pub k_min: Option<f64>,
    pub k_max: Option<f64>,
    pub max_imaginary_residue: Option<f64>,
    pub max_euler_residual: Option<f64>,
    pub error: Option<String>,
}

struct RowStats {
    k_min: f64,
    k_max: f64,
    imag: f64,
    euler: f64,
}

fn sweep_point(cfg: &RunConfig, algebra: &str, norm: &str) -> Result<RowStats> {
    let (alg, norm, _) = load_pair(algebra, norm)?;
    let diff = cfg.diff_config();
    let mut s = RowStats {
        k_min: f64::INFINITY,
        k_max: f64::NEG_INFINITY,
        imag: 0.0,
        euler: 0.0,
    };
    for v in unit_sphere(alg.dim(), cfg.samples, cfg.seed) {
        let data = curvature_block(&alg, &norm, &v, &diff)?;
        let k = data.holomorphic_sectional();
        s.k_min = s.k_min.min(k.value);
        s.k_max = s.k_max.max(k.value);
        s.imag = s.imag.max(k.imaginary_residue);
        s.euler = s.euler.max(euler_residuals(&data.jet).max());
    }
    Ok(s)
}

pub fn sweep(cfg: &RunConfig, algebra: &str, norm: &str, grid: &[String]) -> Result<Outcome> {
    let axes = parse_grid(grid)?;
    for (key, _) in &axes {
        let pat = format!("{{{key}}}");
        if !algebra.contains(&pat) && !norm.contains(&pat) {
            return Err(Error::Input(format!(
                "grid axis '{key}' does not appear as {pat} in either template"
            )));
        }
    }
    let points = grid_points(&axes);
    let inputs = vec![digest_arg("algebra", algebra)?, digest_arg("norm", norm)?];
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs())
        .build()
        .map_err(|e| Error::Parameter(format!("thread pool: {e}")))?;
    info!("sweep: {} points on {} threads", points.len(), cfg.jobs());
    let rows: Vec<SweepRow> = pool.install(|| {
        points
            .par_iter()
            .map(|p| {
                let a = substitute(algebra, p);
                let nrm = substitute(norm, p);
                let stats = sweep_point(cfg, &a, &nrm);
                let (stats, error) = match stats {
                    Ok(s) => (Some(s), None),
                    Err(e) => (None, Some(e.to_string())),
                };
                SweepRow {
                    params: p.iter().cloned().collect(),
                    algebra: a,
                    norm: nrm,
                    k_min: stats.as_ref().map(|s| s.k_min),
                    k_max: stats.as_ref().map(|s| s.k_max),
                    max_imaginary_residue: stats.as_ref().map(|s| s.imag),
                    max_euler_residual: stats.as_ref().map(|s| s.euler),
                    error,
                }
            })
            .collect()
    });
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    let residuals = vec![
        Residual::info("rows", rows.len() as f64),
        Residual::check("failed_rows", failed as f64, 1.0),
    ];
    Ok(Outcome {
        inputs,
        payload: json!({ "axes": axes.iter().map(|(k, v)| json!({"key": k, "values": v})).collect::<Vec<_>>(), "samples": cfg.samples, "rows": to_value(&rows) }),
        residuals,
        code: 0,
        message: (failed > 0).then(|| format!("{failed} of {} grid points failed", rows.len())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_product_order() {
        let axes = parse_grid(&["beta=1,2".into(), "gamma=3,4,5".into()]).unwrap();
        let pts = grid_points(&axes);
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[1], vec![("beta".to_string(), 1.0), ("gamma".to_string(), 4.0)]);
        assert_eq!(parse_grid(&["beta=1;gamma=2".into()]).unwrap().len(), 2);
        assert!(parse_grid(&[]).is_err());
        assert!(parse_grid(&["beta=1".into(), "beta=2".into()]).is_err());
    }

    #[test]
    fn substitution() {
        let p = vec![("beta".to_string(), 0.5), ("gamma".to_string(), -1.0)];
        assert_eq!(
            substitute("builtin:ch2?beta={beta}&gamma={gamma}", &p),
            "builtin:ch2?beta=0.5&gamma=-1"
        );
    }

    #[test]
    fn antisymmetry_is_named() {
        let alg = RealLieAlgebra::new(2, [((0, 0, 1), 1.0), ((0, 1, 0), 1.0)]).unwrap();
        assert_eq!(worst_antisymmetry(&alg).unwrap(), "c^1_{12} + c^1_{21} = 2");
    }
}
