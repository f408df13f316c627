//! Curvature block `R^i_{kj̄}`, the curvature operator `R(w, w̄)v`, and the
//! holomorphic bisectional and sectional curvatures.
//!
//! Index conventions: `r_block.get(i, k, j) = R^i_{kj̄}`,
//! `dn_dv.get(i, k, l) = ∂N^i_k/∂v^l`, `dn_dvbar.get(i, k, t) = ∂N^i_k/∂v̄^t`.

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{ComplexifiedAlgebra, HolVector};
use crate::connection::{nonlinear_connection, solve_n};
use crate::error::{Error, Result};
use crate::linalg::{max_abs, norm2, CMat, Tensor3, C64};
use crate::norm::{metric_jet, real_point, real_taylor, DiffConfig, DiffMode, Fiber, MetricJet, NormSpec};
use crate::scalar::Dual;

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureData {
    #[serde(serialize_with = "crate::json::complex_vec")]
    pub v: Vec<C64>,
    /// `R^i_{kj̄}`
    #[serde(serialize_with = "crate::json::tensor")]
    pub r_block: Tensor3,
    #[serde(serialize_with = "crate::json::tensor")]
    pub dn_dv: Tensor3,
    #[serde(serialize_with = "crate::json::tensor")]
    pub dn_dvbar: Tensor3,
    #[serde(serialize_with = "crate::json::matrix")]
    pub n_hol: CMat,
    pub mode: DiffMode,
    #[serde(skip)]
    pub jet: MetricJet,
}

/// `g_v(R(w, w̄)v, v) / (g_v(v, v) g_v(w, w))` split into real value and
/// imaginary residue.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bisectional {
    pub value: f64,
    pub imaginary_residue: f64,
}

/// Wirtinger derivatives of `v ↦ N(v)` from the jet's derivative tensors,
/// propagated through the linear solve with dual numbers.
pub(crate) fn n_derivatives(alg: &ComplexifiedAlgebra, jet: &MetricJet) -> Result<(Tensor3, Tensor3)> {
    let n = alg.dim();
    let mut real = Vec::with_capacity(2 * n);
    for dir in 0..2 * n {
        let fiber = Fiber::<Dual<f64>>::seeded(&jet.taylor, &jet.v, dir);
        let nd = solve_n(alg, &fiber)?;
        real.push(CMat::from_fn(n, |i, k| {
            let z = nd.get(i, k);
            C64::new(z.re.eps, z.im.eps)
        }));
    }
    let half_i = C64::new(0.0, 0.5);
    let dv = Tensor3::from_fn(n, |i, k, l| real[l].get(i, k) * 0.5 - half_i * real[n + l].get(i, k));
    let dvbar = Tensor3::from_fn(n, |i, k, l| real[l].get(i, k) * 0.5 + half_i * real[n + l].get(i, k));
    let worst = dv.max_abs().max(dvbar.max_abs());
    if !worst.is_finite() {
        return Err(Error::Differentiation("non-finite derivative of N".into()));
    }
    Ok((dv, dvbar))
}

/// `R^i_{kj̄} = -∂_l N^i_k λ^l_{sj̄} v^s + ∂_{t̄} N^i_k conj(N^t_j) - N^i_l λ^l_{kj̄}
/// + λ^i_{lj̄} N^l_k - λ^i_{st̄} v^s λ^{t̄}_{j̄k}`.
fn assemble(alg: &ComplexifiedAlgebra, v: &[C64], nk: &CMat, dv: &Tensor3, dvbar: &Tensor3) -> Tensor3 {
    let n = alg.dim();
    // X[l][j] = λ^l_{sj̄} v^s
    let x = CMat::from_fn(n, |l, j| (0..n).map(|s| alg.lambda_mixed_hol(l, s, j) * v[s]).sum());
    Tensor3::from_fn(n, |i, k, j| {
        let mut acc = C64::zero();
        for l in 0..n {
            acc -= dv.get(i, k, l) * x.get(l, j);
            acc += dvbar.get(i, k, l) * nk.get(l, j).conj();
            acc -= nk.get(i, l) * alg.lambda_mixed_hol(l, k, j);
            acc += alg.lambda_mixed_hol(i, l, j) * nk.get(l, k);
            for t in 0..n {
                acc -= alg.lambda_mixed_hol(i, l, t) * v[l] * alg.lambda_conj_mixed(t, j, k);
            }
        }
        acc
    })
}

pub fn curvature_block(
    alg: &ComplexifiedAlgebra,
    norm: &NormSpec,
    v: &[C64],
    cfg: &DiffConfig,
) -> Result<CurvatureData> {
    let jet = metric_jet(norm, v, cfg)?;
    curvature_from_jet(alg, jet)
}

pub fn curvature_from_jet(alg: &ComplexifiedAlgebra, jet: MetricJet) -> Result<CurvatureData> {
    let (nk, _, _) = nonlinear_connection(alg, &jet)?;
    let (dn_dv, dn_dvbar) = n_derivatives(alg, &jet)?;
    let r_block = assemble(alg, &jet.v, &nk, &dn_dv, &dn_dvbar);
    Ok(CurvatureData {
        v: jet.v.clone(),
        r_block,
        dn_dv,
        dn_dvbar,
        n_hol: nk,
        mode: jet.mode,
        jet,
    })
}

fn check_w(w: &[C64], n: usize) -> Result<()> {
    if w.len() != n {
        return Err(Error::Input(format!("w has {} components, expected {n}", w.len())));
    }
    if w.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Input("w has non-finite components".into()));
    }
    if w.iter().all(|z| z.norm_sqr() == 0.0) {
        return Err(Error::ZeroDirection);
    }
    Ok(())
}

impl CurvatureData {
    pub fn dim(&self) -> usize {
        self.v.len()
    }

    /// `R(w, w̄)v = -w^k w̄^j R^i_{kj̄} e_i`.
    pub fn apply(&self, w: &[C64]) -> HolVector {
        let n = self.dim();
        HolVector(
            (0..n)
                .map(|i| {
                    let mut acc = C64::zero();
                    for k in 0..n {
                        for j in 0..n {
                            acc -= w[k] * w[j].conj() * self.r_block.get(i, k, j);
                        }
                    }
                    acc
                })
                .collect(),
        )
    }

    pub fn bisectional(&self, w: &[C64]) -> Result<Bisectional> {
        check_w(w, self.dim())?;
        let r = self.apply(w);
        let num = self.jet.inner(&r, &self.v);
        let den = self.jet.inner(&self.v, &self.v).re * self.jet.inner(w, w).re;
        Ok(Bisectional {
            value: num.re / den,
            imaginary_residue: num.im / den,
        })
    }

    /// `K(v) = 2 g_v(R(v, v̄)v, v) / F⁴` with `F⁴ = g_v(v, v)²`, i.e. `2 B(v, v)`.
    pub fn holomorphic_sectional(&self) -> Bisectional {
        let b = self.bisectional(&self.v.clone()).expect("v is nonzero");
        Bisectional {
            value: 2.0 * b.value,
            imaginary_residue: 2.0 * b.imaginary_residue,
        }
    }
}

pub fn curvature_operator(
    alg: &ComplexifiedAlgebra,
    norm: &NormSpec,
    v: &[C64],
    w: &[C64],
    cfg: &DiffConfig,
) -> Result<HolVector> {
    let data = curvature_block(alg, norm, v, cfg)?;
    check_w(w, data.dim())?;
    Ok(data.apply(w))
}

pub fn bisectional(
    alg: &ComplexifiedAlgebra,
    norm: &NormSpec,
    v: &[C64],
    w: &[C64],
    cfg: &DiffConfig,
) -> Result<Bisectional> {
    curvature_block(alg, norm, v, cfg)?.bisectional(w)
}

pub fn holomorphic_sectional(
    alg: &ComplexifiedAlgebra,
    norm: &NormSpec,
    v: &[C64],
    cfg: &DiffConfig,
) -> Result<Bisectional> {
    Ok(curvature_block(alg, norm, v, cfg)?.holomorphic_sectional())
}

/// `N(p)` at an arbitrary nonzero point from a second-order jet.
fn n_at(alg: &ComplexifiedAlgebra, norm: &NormSpec, p: &[C64], cfg: &DiffConfig) -> Result<CMat> {
    let t = real_taylor(norm, &real_point(p), 2, cfg)?;
    solve_n(alg, &Fiber::from_taylor(&t, p))
}

/// `D_X f(v) = d/dh f(v + hX)` for `f(p) = N(p) w`, by central differences
/// with one Richardson step.
fn directional(
    alg: &ComplexifiedAlgebra,
    norm: &NormSpec,
    v: &[C64],
    x: &[C64],
    w: &[C64],
    h: f64,
    cfg: &DiffConfig,
) -> Result<Vec<C64>> {
    let len = norm2(x);
    if len == 0.0 {
        return Ok(vec![C64::zero(); v.len()]);
    }
    let unit: Vec<C64> = x.iter().map(|z| z / len).collect();
    let central = |h: f64| -> Result<Vec<C64>> {
        let shift = |s: f64| -> Vec<C64> { v.iter().zip(&unit).map(|(a, b)| a + b * s).collect() };
        let plus = n_at(alg, norm, &shift(h), cfg)?.mul_vec(w);
        let minus = n_at(alg, norm, &shift(-h), cfg)?.mul_vec(w);
        Ok(plus.iter().zip(&minus).map(|(p, m)| (p - m) / (2.0 * h)).collect())
    };
    let coarse = central(h)?;
    let fine = central(h / 2.0)?;
    Ok(coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (f * 4.0 - c) / 3.0 * len)
        .collect())
}

/// `R(w, w̄)v` from the operator form
/// `𝒟_{[v,w̄]^{1,0}} 𝒩(w) - 𝒟_{conj 𝒩(w)} 𝒩(w) + 𝒩([w,w̄]^{1,0}) - [𝒩(w), w̄]^{1,0} + [v, [w̄,w]^{0,1}]^{1,0}`,
/// where `𝒟` differentiates the map `p ↦ N(p)w` along the flat directions.
/// Uses no index-form derivative blocks.
pub fn curvature_operator_coordinate_free(
    alg: &ComplexifiedAlgebra,
    norm: &NormSpec,
    v: &[C64],
    w: &[C64],
    cfg: &DiffConfig,
) -> Result<HolVector> {
    let jet = metric_jet(norm, v, cfg)?;
    check_w(w, jet.dim())?;
    let (nk, _, _) = nonlinear_connection(alg, &jet)?;
    let n = alg.dim();
    let scale = v.iter().fold(0.0f64, |a, z| a.max(z.re.abs()).max(z.im.abs())).max(1.0);
    let h = match cfg.effective_mode(norm) {
        DiffMode::Dual => f64::EPSILON.powf(0.2) * scale,
        DiffMode::Fd => cfg.step(3, scale),
    };
    let i = C64::new(0.0, 1.0);
    let times_i = |x: &[C64]| -> Vec<C64> { x.iter().map(|z| z * i).collect() };

    // holomorphic derivative along X: ½(D_X - √-1 D_{√-1 X})
    let x = alg.bracket_with_conj(v, w).hol_part();
    let dx = directional(alg, norm, v, &x, w, h, cfg)?;
    let dix = directional(alg, norm, v, &times_i(&x), w, h, cfg)?;
    // antiholomorphic derivative along conj(Y): ½(D_Y + √-1 D_{√-1 Y})
    let y = nk.mul_vec(w);
    let dy = directional(alg, norm, v, &y, w, h, cfg)?;
    let diy = directional(alg, norm, v, &times_i(&y), w, h, cfg)?;

    let wwbar = alg.bracket_with_conj(w, w).hol_part();
    let n_wwbar = nk.mul_vec(&wwbar);
    let nw_wbar = alg.bracket_with_conj(&y, w).hol_part();
    // [w̄, w]^{0,1} = conj(z)^t ē_t with z the conjugate coordinates
    let z = alg.bracket_with_conj(w, w).conj().anti_conj_coords();
    let last = alg.bracket_with_conj(v, &z).hol_part();

    Ok(HolVector(
        (0..n)
            .map(|a| (dx[a] - i * dix[a]) * 0.5 - (dy[a] + i * diy[a]) * 0.5 + n_wwbar[a] - nw_wbar[a] + last[a])
            .collect(),
    ))
}

/// Largest `|R^i_{kj̄}|`.
pub fn block_max(data: &CurvatureData) -> f64 {
    data.r_block.max_abs()
}

/// Relative mismatch of two operator vectors.
pub fn relative_difference(a: &[C64], b: &[C64]) -> f64 {
    let diff: Vec<C64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    max_abs(&diff) / max_abs(b).max(1.0)
}
