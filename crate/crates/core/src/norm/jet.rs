//! Fundamental tensor, its inverse, the Cartan tensors and the Euler
//! identities at a direction `v`.

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use super::spec::NormSpec;
use super::taylor::{real_taylor, DiffConfig, DiffMode, RealTaylor};
use crate::error::{Error, Result};
use crate::linalg::{max_abs, norm2, CMat, Tensor3, C64};
use crate::sampling;
use crate::scalar::{Dual, Scalar};

/// Wirtinger operator acting on a real derivative tensor.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Wirt {
    /// `∂/∂v^i = (∂/∂x_i - √-1 ∂/∂y_i) / 2`
    Hol(usize),
    /// `∂/∂v̄^i = (∂/∂x_i + √-1 ∂/∂y_i) / 2`
    Anti(usize),
    /// Plain real coordinate derivative.
    Real(usize),
}

fn wirt_rec(t: &RealTaylor, n: usize, ops: &[Wirt], coef: C64, idx: &mut Vec<usize>, acc: &mut C64) {
    match ops.split_first() {
        None => *acc += coef * t.get(idx),
        Some((op, rest)) => {
            let terms: &[(usize, C64)] = &match *op {
                Wirt::Hol(i) => [(i, C64::new(0.5, 0.0)), (n + i, C64::new(0.0, -0.5))],
                Wirt::Anti(i) => [(i, C64::new(0.5, 0.0)), (n + i, C64::new(0.0, 0.5))],
                Wirt::Real(a) => [(a, C64::new(1.0, 0.0)), (a, C64::zero())],
            };
            for &(a, c) in terms {
                if c == C64::zero() {
                    continue;
                }
                idx.push(a);
                wirt_rec(t, n, rest, coef * c, idx, acc);
                idx.pop();
            }
        }
    }
}

pub(crate) fn wirtinger(t: &RealTaylor, ops: &[Wirt]) -> C64 {
    let mut acc = C64::zero();
    wirt_rec(
        t,
        t.dim() / 2,
        ops,
        C64::new(1.0, 0.0),
        &mut Vec::with_capacity(ops.len()),
        &mut acc,
    );
    acc
}

pub(crate) fn real_point(v: &[C64]) -> Vec<f64> {
    v.iter().map(|z| z.re).chain(v.iter().map(|z| z.im)).collect()
}

/// Metric data at one direction over a scalar field; with `Dual<f64>` the
/// infinitesimal parts carry a derivative along one real coordinate.
#[derive(Clone, Debug)]
pub(crate) struct Fiber<S: Scalar> {
    pub v: Vec<Complex<S>>,
    /// `g[i][j] = g_{i j̄}`
    pub g: CMat<S>,
    /// `g_antihol[j][t] = ∂²F²/∂v̄^j ∂v̄^t`
    pub g_antihol: CMat<S>,
    /// `c_plus[i][j][l] = C_{i j̄ l}`, present when the jet order allows.
    pub c_plus: Option<Tensor3<S>>,
    /// `c_minus[i][j][l] = C_{i j̄ l̄}`
    pub c_minus: Option<Tensor3<S>>,
}

impl Fiber<f64> {
    pub fn from_taylor(t: &RealTaylor, v: &[C64]) -> Self {
        let n = v.len();
        let g = CMat::from_fn(n, |i, j| wirtinger(t, &[Wirt::Hol(i), Wirt::Anti(j)]));
        let g_antihol = CMat::from_fn(n, |j, k| wirtinger(t, &[Wirt::Anti(j), Wirt::Anti(k)]));
        let (c_plus, c_minus) = if t.order() >= 3 {
            (
                Some(Tensor3::from_fn(n, |i, j, l| {
                    wirtinger(t, &[Wirt::Hol(i), Wirt::Anti(j), Wirt::Hol(l)])
                })),
                Some(Tensor3::from_fn(n, |i, j, l| {
                    wirtinger(t, &[Wirt::Hol(i), Wirt::Anti(j), Wirt::Anti(l)])
                })),
            )
        } else {
            (None, None)
        };
        Fiber {
            v: v.to_vec(),
            g,
            g_antihol,
            c_plus,
            c_minus,
        }
    }
}

impl Fiber<Dual<f64>> {
    /// Fiber seeded along the real coordinate `dir` of `(x, y)`; needs jet
    /// order ≥ 3, and ≥ 4 for the Cartan tensors.
    pub fn seeded(t: &RealTaylor, v: &[C64], dir: usize) -> Self {
        let n = v.len();
        debug_assert!(t.order() >= 3);
        let d = |a: C64, b: C64| Complex::new(Dual::new(a.re, b.re), Dual::new(a.im, b.im));
        let entry = |ops: &[Wirt]| {
            let mut with_dir = ops.to_vec();
            with_dir.push(Wirt::Real(dir));
            d(wirtinger(t, ops), wirtinger(t, &with_dir))
        };
        let vs = v
            .iter()
            .enumerate()
            .map(|(i, &z)| {
                let dz = if dir == i {
                    C64::new(1.0, 0.0)
                } else if dir == n + i {
                    C64::new(0.0, 1.0)
                } else {
                    C64::zero()
                };
                d(z, dz)
            })
            .collect();
        let g = CMat::from_fn(n, |i, j| entry(&[Wirt::Hol(i), Wirt::Anti(j)]));
        let g_antihol = CMat::from_fn(n, |j, k| entry(&[Wirt::Anti(j), Wirt::Anti(k)]));
        let (c_plus, c_minus) = if t.order() >= 4 {
            (
                Some(Tensor3::from_fn(n, |i, j, l| {
                    entry(&[Wirt::Hol(i), Wirt::Anti(j), Wirt::Hol(l)])
                })),
                Some(Tensor3::from_fn(n, |i, j, l| {
                    entry(&[Wirt::Hol(i), Wirt::Anti(j), Wirt::Anti(l)])
                })),
            )
        } else {
            (None, None)
        };
        Fiber {
            v: vs,
            g,
            g_antihol,
            c_plus,
            c_minus,
        }
    }
}

/// Everything the connection needs at one direction.
#[derive(Clone, Debug)]
pub struct MetricJet {
    pub v: Vec<C64>,
    pub f2: f64,
    /// `g.get(i, j) = g_{i j̄}`
    pub g: CMat,
    /// Matrix inverse of `g`, so `g_inv.get(q, j) = g^{q̄ j}`.
    pub g_inv: CMat,
    /// `g_antihol.get(j, t) = ∂²F²/∂v̄^j ∂v̄^t`
    pub g_antihol: CMat,
    /// `c_plus.get(i, j, l) = C_{i j̄ l}`
    pub c_plus: Tensor3,
    /// `c_minus.get(i, j, l) = C_{i j̄ l̄}`
    pub c_minus: Tensor3,
    pub min_eigenvalue: f64,
    /// `|g g_inv - Id|_∞`
    pub inverse_residual: f64,
    pub mode: DiffMode,
    pub(crate) taylor: RealTaylor,
}

impl MetricJet {
    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub(crate) fn fiber(&self) -> Fiber<f64> {
        Fiber {
            v: self.v.clone(),
            g: self.g.clone(),
            g_antihol: self.g_antihol.clone(),
            c_plus: Some(self.c_plus.clone()),
            c_minus: Some(self.c_minus.clone()),
        }
    }

    /// `g_v(a, b) = g_{i j̄} a^i b̄^j`.
    pub fn inner(&self, a: &[C64], b: &[C64]) -> C64 {
        let n = self.dim();
        let mut acc = C64::zero();
        for i in 0..n {
            for j in 0..n {
                acc += self.g.get(i, j) * a[i] * b[j].conj();
            }
        }
        acc
    }
}

fn pseudoconvex(g: &CMat) -> Result<f64> {
    let min = g.min_hermitian_eigenvalue();
    if !(min > 1e-12 * g.max_abs()) {
        return Err(Error::StronglyPseudoconvexViolation { min_eigenvalue: min });
    }
    Ok(min)
}

fn check_nonzero(norm: &NormSpec, v: &[C64]) -> Result<()> {
    norm.check_direction(v)?;
    if v.iter().all(|z| z.norm_sqr() == 0.0) {
        return Err(Error::ZeroDirection);
    }
    Ok(())
}

/// Metric jet built from derivative tensors of the given order (3 or 4).
pub(crate) fn metric_jet_order(norm: &NormSpec, v: &[C64], cfg: &DiffConfig, order: usize) -> Result<MetricJet> {
    check_nonzero(norm, v)?;
    let taylor = real_taylor(norm, &real_point(v), order, cfg)?;
    let fiber = Fiber::from_taylor(&taylor, v);
    let min_eigenvalue = pseudoconvex(&fiber.g)?;
    let g_inv = fiber.g.inverse()?;
    let inverse_residual = fiber.g.mul(&g_inv).max_abs_diff(&CMat::identity(v.len()));
    Ok(MetricJet {
        v: v.to_vec(),
        f2: taylor.value(),
        g: fiber.g,
        g_inv,
        g_antihol: fiber.g_antihol,
        c_plus: fiber.c_plus.expect("order ≥ 3"),
        c_minus: fiber.c_minus.expect("order ≥ 3"),
        min_eigenvalue,
        inverse_residual,
        mode: cfg.effective_mode(norm),
        taylor,
    })
}

/// Metric jet at `v ≠ 0`. Fails when `g` is not positive definite.
pub fn metric_jet(norm: &NormSpec, v: &[C64], cfg: &DiffConfig) -> Result<MetricJet> {
    metric_jet_order(norm, v, cfg, 3)
}

/// The Euler identities, each normalized to be scale free:
/// `g v v̄ = F²`, `C_{i j̄ l} v^l = 0`, `C_{i j̄ l̄} v̄^l = 0`,
/// `C_{i j̄ t̄} v^i = g_{j̄ t̄}`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EulerResiduals {
    pub f2_identity: f64,
    pub cartan_hol_contraction: f64,
    pub cartan_anti_contraction: f64,
    pub cartan_antihol_trace: f64,
}

impl EulerResiduals {
    pub fn max(&self) -> f64 {
        self.f2_identity
            .max(self.cartan_hol_contraction)
            .max(self.cartan_anti_contraction)
            .max(self.cartan_antihol_trace)
    }

    pub fn as_array(&self) -> [f64; 4] {
        [
            self.f2_identity,
            self.cartan_hol_contraction,
            self.cartan_anti_contraction,
            self.cartan_antihol_trace,
        ]
    }
}

pub fn euler_residuals(jet: &MetricJet) -> EulerResiduals {
    let n = jet.dim();
    let v = &jet.v;
    let r = norm2(v);
    let f2 = jet.f2;
    let gvv = jet.inner(v, v);
    let f2_identity = (gvv - f2).norm() / f2;
    let mut hol_c = Vec::with_capacity(n * n);
    let mut anti_c = Vec::with_capacity(n * n);
    let mut trace = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            hol_c.push((0..n).map(|l| jet.c_plus.get(i, j, l) * v[l]).sum::<C64>());
            anti_c.push((0..n).map(|l| jet.c_minus.get(i, j, l) * v[l].conj()).sum::<C64>());
            // here (i, j) play the roles of (j̄, t̄)
            let contracted: C64 = (0..n).map(|s| jet.c_minus.get(s, i, j) * v[s]).sum();
            trace.push(contracted - jet.g_antihol.get(i, j));
        }
    }
    let scale = f2 / (r * r);
    EulerResiduals {
        f2_identity,
        cartan_hol_contraction: max_abs(&hol_c) / scale,
        cartan_anti_contraction: max_abs(&anti_c) / scale,
        cartan_antihol_trace: max_abs(&trace) / scale,
    }
}

/// `|F²(λv) - |λ|² F²(v)| / (|λ|² F²(v))`.
pub fn check_homogeneity(norm: &NormSpec, v: &[C64], lambda: C64) -> Result<f64> {
    check_nonzero(norm, v)?;
    let base = norm.f_squared(v)?;
    let scaled: Vec<C64> = v.iter().map(|z| z * lambda).collect();
    let target = lambda.norm_sqr() * base;
    Ok((norm.f_squared(&scaled)? - target).abs() / target)
}

#[derive(Clone, Debug, Serialize)]
pub struct PseudoconvexityReport {
    pub samples: usize,
    pub seed: u64,
    pub min_eigenvalue: f64,
    #[serde(serialize_with = "crate::json::complex_vec")]
    pub worst_direction: Vec<C64>,
    pub pass: bool,
}

/// Smallest eigenvalue of `g_{i j̄}` over seeded unit directions.
pub fn check_pseudoconvexity(
    norm: &NormSpec,
    samples: usize,
    seed: u64,
    cfg: &DiffConfig,
) -> Result<PseudoconvexityReport> {
    let mut min_eigenvalue = f64::INFINITY;
    let mut worst_direction = Vec::new();
    for v in sampling::unit_sphere(norm.dim(), samples, seed) {
        let t = real_taylor(norm, &real_point(&v), 2, cfg)?;
        let g = Fiber::from_taylor(&t, &v).g;
        let e = g.min_hermitian_eigenvalue();
        if e < min_eigenvalue {
            min_eigenvalue = e;
            worst_direction = v.0;
        }
    }
    Ok(PseudoconvexityReport {
        samples,
        seed,
        min_eigenvalue,
        worst_direction,
        pass: min_eigenvalue > 0.0,
    })
}
