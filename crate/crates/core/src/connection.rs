//! Nonlinear connection `N^i_k`, horizontal Chern-Rund coefficients
//! `Γ^j_{ik}`, torsion `T^j_{ik}` and the operator `𝒩` of a left-invariant
//! metric at a direction `v`.
//!
//! Index conventions: `n_hol.get(i, k) = N^i_k`, `gamma.get(j, i, k) = Γ^j_{ik}`,
//! `torsion.get(j, i, k) = T^j_{ik}`. `A[t][j][k] = λ^{t̄}_{j̄k}` is the `ē_t`
//! coefficient of `[ē_j, e_k]`, equal to `conj(λ^t_{jk̄})`.

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{ComplexifiedAlgebra, HolVector};
use crate::error::{Error, Result};
use crate::linalg::{max_abs, CMat, Tensor3, C64};
use crate::norm::{Fiber, MetricJet};
use crate::scalar::{lift, Scalar};

#[derive(Clone, Debug, Serialize)]
pub struct ConnectionData {
    #[serde(serialize_with = "crate::json::complex_vec")]
    pub v: Vec<C64>,
    /// `N^i_k`
    #[serde(serialize_with = "crate::json::matrix")]
    pub n_hol: CMat,
    /// `N^i_{j̄} = -λ^i_{k j̄} v^k`
    #[serde(serialize_with = "crate::json::matrix")]
    pub n_bar_arg: CMat,
    /// `Γ^j_{ik}`
    #[serde(serialize_with = "crate::json::tensor")]
    pub gamma: Tensor3,
    /// `Γ^j_{ik̄} = -λ^j_{ik̄}`
    #[serde(serialize_with = "crate::json::tensor")]
    pub gamma_mixed: Tensor3,
    /// `T^j_{ik}`
    #[serde(serialize_with = "crate::json::tensor")]
    pub torsion: Tensor3,
    /// `max_k |g^T N_{·k} - rhs_k|_∞`
    pub n_system_residual: f64,
    /// `max |v^i Γ^j_{ik} - N^j_k|`
    pub contraction_residual: f64,
}

fn check_dims(alg: &ComplexifiedAlgebra, jet: &MetricJet) -> Result<()> {
    if alg.dim() != jet.dim() {
        return Err(Error::Input(format!(
            "algebra has complex dimension {} but the norm lives on C^{}",
            alg.dim(),
            jet.dim()
        )));
    }
    Ok(())
}

fn conj<S: Scalar>(z: Complex<S>) -> Complex<S> {
    Complex::new(z.re, -z.im)
}

/// `λ^{t̄}_{ōk} = v̄^s λ^{t̄}_{s̄k}`, stored `[t][k]`.
fn vbar_lambda<S: Scalar>(alg: &ComplexifiedAlgebra, v: &[Complex<S>]) -> Vec<Vec<Complex<S>>> {
    let n = alg.dim();
    (0..n)
        .map(|t| {
            (0..n)
                .map(|k| {
                    let mut acc = Complex::zero();
                    for (s, vs) in v.iter().enumerate() {
                        acc = acc + conj(*vs) * lift::<S>(alg.lambda_conj_mixed(t, s, k));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Right-hand sides `rhs[k][q] = g_{it̄} v^i λ^{t̄}_{q̄k} + g_{q̄t̄} λ^{t̄}_{ōk}`.
fn n_rhs<S: Scalar>(alg: &ComplexifiedAlgebra, f: &Fiber<S>) -> Vec<Vec<Complex<S>>> {
    let n = alg.dim();
    let vl = vbar_lambda(alg, &f.v);
    // g_{it̄} v^i
    let gv: Vec<Complex<S>> = (0..n)
        .map(|t| {
            let mut acc = Complex::zero();
            for i in 0..n {
                acc = acc + f.g.get(i, t) * f.v[i];
            }
            acc
        })
        .collect();
    (0..n)
        .map(|k| {
            (0..n)
                .map(|q| {
                    let mut acc = Complex::zero();
                    for t in 0..n {
                        acc = acc + gv[t] * lift::<S>(alg.lambda_conj_mixed(t, q, k));
                        acc = acc + f.g_antihol.get(q, t) * vl[t][k];
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Solves `g_{sq̄} N^s_k = rhs_q(k)` column by column.
pub(crate) fn solve_n<S: Scalar>(alg: &ComplexifiedAlgebra, f: &Fiber<S>) -> Result<CMat<S>> {
    let n = alg.dim();
    let lu = f.g.transpose().lu()?;
    let mut out = CMat::zeros(n);
    for (k, rhs) in n_rhs(alg, f).iter().enumerate() {
        for (j, x) in lu.solve(rhs).into_iter().enumerate() {
            out.set(j, k, x);
        }
    }
    Ok(out)
}

/// `Γ^j_{ik}` from `g_{sq̄} Γ^s_{ik} = g_{it̄} λ^{t̄}_{q̄k} - C_{iq̄l} N^l_k + C_{iq̄t̄} λ^{t̄}_{ōk}`.
pub(crate) fn solve_gamma<S: Scalar>(alg: &ComplexifiedAlgebra, f: &Fiber<S>, nk: &CMat<S>) -> Result<Tensor3<S>> {
    let n = alg.dim();
    let (cp, cm) = match (&f.c_plus, &f.c_minus) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::Differentiation(
                "Cartan tensors are not available at this order".into(),
            ))
        }
    };
    let vl = vbar_lambda(alg, &f.v);
    let lu = f.g.transpose().lu()?;
    let mut out = Tensor3::zeros(n);
    for i in 0..n {
        for k in 0..n {
            let rhs: Vec<Complex<S>> = (0..n)
                .map(|q| {
                    let mut acc = Complex::zero();
                    for t in 0..n {
                        acc = acc + f.g.get(i, t) * lift::<S>(alg.lambda_conj_mixed(t, q, k));
                        acc = acc - cp.get(i, q, t) * nk.get(t, k);
                        acc = acc + cm.get(i, q, t) * vl[t][k];
                    }
                    acc
                })
                .collect();
            for (j, x) in lu.solve(&rhs).into_iter().enumerate() {
                out.set(j, i, k, x);
            }
        }
    }
    Ok(out)
}

/// `N^i_k` and `N^i_{j̄}` at the jet's direction, plus the solve residual.
pub fn nonlinear_connection(alg: &ComplexifiedAlgebra, jet: &MetricJet) -> Result<(CMat, CMat, f64)> {
    check_dims(alg, jet)?;
    let n = alg.dim();
    let fiber = jet.fiber();
    let nk = solve_n(alg, &fiber)?;
    let mut residual: f64 = 0.0;
    for (k, rhs) in n_rhs(alg, &fiber).iter().enumerate() {
        for q in 0..n {
            let lhs: C64 = (0..n).map(|s| jet.g.get(s, q) * nk.get(s, k)).sum();
            residual = residual.max((lhs - rhs[q]).norm());
        }
    }
    let n_bar = CMat::from_fn(n, |i, j| {
        -(0..n).map(|k| alg.lambda_mixed_hol(i, k, j) * jet.v[k]).sum::<C64>()
    });
    Ok((nk, n_bar, residual))
}

/// `Γ^j_{ik}` and `Γ^j_{ik̄}`.
pub fn horizontal_coefficients(alg: &ComplexifiedAlgebra, jet: &MetricJet, nk: &CMat) -> Result<(Tensor3, Tensor3)> {
    check_dims(alg, jet)?;
    let gamma = solve_gamma(alg, &jet.fiber(), nk)?;
    let n = alg.dim();
    let mixed = Tensor3::from_fn(n, |j, i, k| -alg.lambda_mixed_hol(j, i, k));
    Ok((gamma, mixed))
}

/// `T^j_{ik} = ½{λ_k^j_i - λ^j_{ik} - λ_i^j_k + C_i^j_l N^l_k - C_i^j_{t̄} λ^{t̄}_{ōk}
/// - C_k^j_l N^l_i + C_k^j_{t̄} λ^{t̄}_{ōi}}` with indices raised by `g^{q̄j}`.
pub fn torsion(alg: &ComplexifiedAlgebra, jet: &MetricJet, nk: &CMat) -> Result<Tensor3> {
    check_dims(alg, jet)?;
    let n = alg.dim();
    let vl = vbar_lambda(alg, &jet.v);
    let raise =
        |lower: &dyn Fn(usize) -> C64, j: usize| -> C64 { (0..n).map(|q| jet.g_inv.get(q, j) * lower(q)).sum() };
    // λ_i^j_k
    let lam_raised = Tensor3::from_fn(n, |j, i, k| {
        raise(
            &|q| (0..n).map(|s| jet.g.get(i, s) * alg.lambda_conj_mixed(s, q, k)).sum(),
            j,
        )
    });
    // C_i^j_l N^l_k - C_i^j_{t̄} λ^{t̄}_{ōk}
    let cartan = Tensor3::from_fn(n, |j, i, k| {
        raise(
            &|q| {
                (0..n)
                    .map(|l| jet.c_plus.get(i, q, l) * nk.get(l, k) - jet.c_minus.get(i, q, l) * vl[l][k])
                    .sum()
            },
            j,
        )
    });
    Ok(Tensor3::from_fn(n, |j, i, k| {
        (lam_raised.get(j, k, i) - alg.lambda(j, i, k) - lam_raised.get(j, i, k) + cartan.get(j, i, k)
            - cartan.get(j, k, i))
            * 0.5
    }))
}

/// `𝒩(w)^i = N^i_k w^k`.
pub fn connection_operator(nk: &CMat, w: &[C64]) -> HolVector {
    HolVector(nk.mul_vec(w))
}

/// `S̄_v(a, b) = g_{j̄t̄} ā^j b̄^t`.
pub fn s_bar(jet: &MetricJet, a: &[C64], b: &[C64]) -> C64 {
    let n = jet.dim();
    let mut acc = C64::zero();
    for j in 0..n {
        for t in 0..n {
            acc += jet.g_antihol.get(j, t) * a[j].conj() * b[t].conj();
        }
    }
    acc
}

/// `S_v(a, b) = conj(g_{j̄t̄}) a^j b^t`.
pub fn s_hol(jet: &MetricJet, a: &[C64], b: &[C64]) -> C64 {
    let n = jet.dim();
    let mut acc = C64::zero();
    for j in 0..n {
        for t in 0..n {
            acc += jet.g_antihol.get(j, t).conj() * a[j] * b[t];
        }
    }
    acc
}

/// `|g_v(𝒩(w), u) - g_v(v, [u, w̄]^{1,0}) - S̄_v(u, [v, w̄]^{1,0})|`.
pub fn connection_identity_residual(
    alg: &ComplexifiedAlgebra,
    jet: &MetricJet,
    nk: &CMat,
    u: &[C64],
    w: &[C64],
) -> f64 {
    let nw = connection_operator(nk, w);
    let lhs = jet.inner(&nw, u);
    let uw = alg.bracket_with_conj(u, w).hol_part();
    let vw = alg.bracket_with_conj(&jet.v, w).hol_part();
    (lhs - jet.inner(&jet.v, &uw) - s_bar(jet, u, &vw)).norm()
}

/// Full connection data at the jet's direction.
pub fn connection(alg: &ComplexifiedAlgebra, jet: &MetricJet) -> Result<ConnectionData> {
    let (n_hol, n_bar_arg, n_system_residual) = nonlinear_connection(alg, jet)?;
    let (gamma, gamma_mixed) = horizontal_coefficients(alg, jet, &n_hol)?;
    let torsion = torsion(alg, jet, &n_hol)?;
    let n = alg.dim();
    let mut contraction = Vec::with_capacity(n * n);
    for j in 0..n {
        for k in 0..n {
            let c: C64 = (0..n).map(|i| jet.v[i] * gamma.get(j, i, k)).sum();
            contraction.push(c - n_hol.get(j, k));
        }
    }
    Ok(ConnectionData {
        v: jet.v.clone(),
        n_hol,
        n_bar_arg,
        gamma,
        gamma_mixed,
        torsion,
        n_system_residual,
        contraction_residual: max_abs(&contraction),
    })
}

/// Closed form for `F² = h_{ij̄} v^i v̄^j`: `Γ^j_{ik} = h^{q̄j} h_{it̄} λ^{t̄}_{q̄k}`.
pub fn hermitian_gamma(alg: &ComplexifiedAlgebra, h: &CMat) -> Result<Tensor3> {
    let n = alg.dim();
    let h_inv = h.inverse()?;
    Ok(Tensor3::from_fn(n, |j, i, k| {
        let mut acc = C64::zero();
        for q in 0..n {
            for t in 0..n {
                acc += h_inv.get(q, j) * h.get(i, t) * alg.lambda_conj_mixed(t, q, k);
            }
        }
        acc
    }))
}

/// Chern torsion of a Hermitian metric: `½{λ_k^j_i - λ^j_{ik} - λ_i^j_k}`.
pub fn hermitian_torsion(alg: &ComplexifiedAlgebra, h: &CMat) -> Result<Tensor3> {
    let g = hermitian_gamma(alg, h)?;
    Ok(Tensor3::from_fn(alg.dim(), |j, i, k| {
        (g.get(j, k, i) - alg.lambda(j, i, k) - g.get(j, i, k)) * 0.5
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Builtin;
    use crate::norm::{metric_jet, DiffConfig, NormSpec};
    use crate::sampling;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn perturbed(n: usize) -> NormSpec {
        NormSpec::perturbed(CMat::identity(n), 0.1, 2).unwrap()
    }

    #[test]
    fn heisenberg_connection_vanishes_and_torsion_is_minus_half_lambda() {
        let alg = Builtin::ComplexHeisenberg.build().unwrap();
        let jet = metric_jet(
            &perturbed(3),
            &[c(0.3, 0.1), c(-0.5, 0.2), c(0.7, -0.4)],
            &DiffConfig::default(),
        )
        .unwrap();
        let data = connection(&alg, &jet).unwrap();
        assert!(data.n_hol.max_abs() < 1e-14);
        assert!(data.gamma.max_abs() < 1e-14);
        assert!((data.torsion.get(2, 0, 1) - c(-0.5, 0.0)).norm() < 1e-14);
        assert!((data.torsion.get(2, 1, 0) - c(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn ch2_hermitian_identity_at_e1() {
        // g = Id, so N^q_k = λ^{1̄}_{q̄k} v^1 = conj(λ^1_{qk̄}).
        let alg = Builtin::Ch2 { beta: 1.0, gamma: 1.0 }.build().unwrap();
        let jet = metric_jet(
            &NormSpec::identity(2),
            &[c(1.0, 0.0), c(0.0, 0.0)],
            &DiffConfig::default(),
        )
        .unwrap();
        let (nk, nbar, res) = nonlinear_connection(&alg, &jet).unwrap();
        assert!(res < 1e-15);
        let a = 1.0 / 2f64.sqrt();
        let b = a;
        assert!((nk.get(0, 0) - c(-a, 0.0)).norm() < 1e-15);
        assert!((nk.get(1, 1) - c(-b, 0.0)).norm() < 1e-15);
        assert!(nk.get(0, 1).norm() < 1e-15 && nk.get(1, 0).norm() < 1e-15);
        // N^i_{j̄} = -λ^i_{1j̄}
        assert!((nbar.get(0, 0) - c(a, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn contraction_identity_and_defining_identity_on_random_directions() {
        let alg = Builtin::Ch2 { beta: 2.0, gamma: 0.5 }.build().unwrap();
        let norm = NormSpec::perturbed(CMat::identity(2), 0.2, 3).unwrap();
        let mut rng = sampling::rng(11);
        for _ in 0..10 {
            let v = sampling::unit_vector(&mut rng, 2);
            let jet = metric_jet(&norm, &v, &DiffConfig::default()).unwrap();
            let data = connection(&alg, &jet).unwrap();
            assert!(data.n_system_residual < 1e-12);
            assert!(data.contraction_residual < 1e-12, "{}", data.contraction_residual);
            for _ in 0..5 {
                let u = sampling::gaussian_vector(&mut rng, 2);
                let w = sampling::gaussian_vector(&mut rng, 2);
                assert!(connection_identity_residual(&alg, &jet, &data.n_hol, &u, &w) < 1e-12);
            }
            for j in 0..2 {
                for i in 0..2 {
                    for k in 0..2 {
                        assert!((data.torsion.get(j, i, k) + data.torsion.get(j, k, i)).norm() < 1e-14);
                        let via_gamma = (data.gamma.get(j, k, i) - data.gamma.get(j, i, k) - alg.lambda(j, i, k)) * 0.5;
                        assert!((data.torsion.get(j, i, k) - via_gamma).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn hermitian_closed_forms_match() {
        let alg = Builtin::Ch2 { beta: 1.0, gamma: 1.0 }.build().unwrap();
        let h = CMat::from_fn(2, |i, j| match (i, j) {
            (0, 0) => c(2.0, 0.0),
            (1, 1) => c(1.0, 0.0),
            (0, 1) => c(0.1, 0.3),
            _ => c(0.1, -0.3),
        });
        let norm = NormSpec::hermitian(h.clone()).unwrap();
        let jet = metric_jet(&norm, &[c(0.2, 0.9), c(-0.4, 0.3)], &DiffConfig::default()).unwrap();
        let data = connection(&alg, &jet).unwrap();
        assert!(data.gamma.max_abs_diff(&hermitian_gamma(&alg, &h).unwrap()) < 1e-13);
        assert!(data.torsion.max_abs_diff(&hermitian_torsion(&alg, &h).unwrap()) < 1e-13);
    }

    #[test]
    fn dimension_mismatch_is_an_input_error() {
        let alg = Builtin::ComplexHeisenberg.build().unwrap();
        let jet = metric_jet(
            &NormSpec::identity(2),
            &[c(1.0, 0.0), c(0.0, 0.0)],
            &DiffConfig::default(),
        )
        .unwrap();
        assert!(matches!(connection(&alg, &jet), Err(Error::Input(_))));
    }
}
