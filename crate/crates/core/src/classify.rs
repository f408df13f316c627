//! Kähler, weakly Kähler and Berwald criteria, and the rigidity theorems for
//! algebras of complex-group type.

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::ComplexifiedAlgebra;
use crate::connection::{connection, s_bar, s_hol, solve_gamma, solve_n, ConnectionData};
use crate::curvature::curvature_from_jet;
use crate::error::{Error, Result};
use crate::linalg::{CMat, Tensor3, C64};
use crate::norm::{metric_jet_order, DiffConfig, Fiber, MetricJet, NormSpec};
use crate::sampling;
use crate::scalar::Dual;

/// Default verdict tolerance.
pub const TOL_CLS: f64 = 1e-7;
/// Bound on `|B|` in the rigidity check.
pub const BISECTIONAL_TOL: f64 = 1e-6;
/// Basis-pair probes are exhaustive up to this dimension.
pub const BASIS_PROBE_MAX_DIM: usize = 8;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ClassifyOptions {
    pub diff: DiffConfig,
    pub tol: f64,
    /// Random unit directions added to the basis directions.
    pub samples: usize,
    /// Random probes per direction when `n` exceeds [`BASIS_PROBE_MAX_DIM`].
    pub probes: usize,
    pub seed: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            diff: DiffConfig::default(),
            tol: TOL_CLS,
            samples: 16,
            probes: 64,
            seed: 0,
        }
    }
}

impl ClassifyOptions {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Parameter(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        self.diff.validate()
    }
}

/// `C⁺_v(a, b, c) = C_{kq̄l} a^k b̄^q c^l`.
pub fn cartan_plus(jet: &MetricJet, a: &[C64], b: &[C64], c: &[C64]) -> C64 {
    let n = jet.dim();
    let mut acc = C64::zero();
    for k in 0..n {
        for q in 0..n {
            for l in 0..n {
                acc += jet.c_plus.get(k, q, l) * a[k] * b[q].conj() * c[l];
            }
        }
    }
    acc
}

/// `C⁻_v(a, b, c) = C_{kq̄t̄} a^k b̄^q c̄^t`.
pub fn cartan_minus(jet: &MetricJet, a: &[C64], b: &[C64], c: &[C64]) -> C64 {
    let n = jet.dim();
    let mut acc = C64::zero();
    for k in 0..n {
        for q in 0..n {
            for t in 0..n {
                acc += jet.c_minus.get(k, q, t) * a[k] * b[q].conj() * c[t].conj();
            }
        }
    }
    acc
}

/// The bilinear form whose vanishing is the Kähler condition:
/// `g_v(w,[u,v̄]^{1,0}) - g_v([v,w]^{1,0},u) - g_v(v,[u,w̄]^{1,0}) - S̄_v(u,[v,w̄]^{1,0})
/// - C⁺_v(w,u,𝒩(v)) + C⁻_v(w,u,[v,v̄]^{1,0})`.
pub fn kahler_form(alg: &ComplexifiedAlgebra, jet: &MetricJet, nk: &CMat, u: &[C64], w: &[C64]) -> C64 {
    let v = &jet.v;
    let u_vbar = alg.bracket_with_conj(u, v).hol_part();
    let v_w = alg.bracket_hol(v, w);
    let u_wbar = alg.bracket_with_conj(u, w).hol_part();
    let v_wbar = alg.bracket_with_conj(v, w).hol_part();
    let v_vbar = alg.bracket_with_conj(v, v).hol_part();
    let nv = nk.mul_vec(v);
    jet.inner(w, &u_vbar)
        - jet.inner(&v_w, u)
        - jet.inner(v, &u_wbar)
        - s_bar(jet, u, &v_wbar)
        - cartan_plus(jet, w, u, &nv)
        + cartan_minus(jet, w, u, &v_vbar)
}

/// `g_v(w,[v,v̄]^{1,0}) - g_v([v,w]^{1,0},v) - g_v(v,[v,w̄]^{1,0}) - S_v(𝒩(v),w)`.
pub fn weakly_kahler_form(alg: &ComplexifiedAlgebra, jet: &MetricJet, nk: &CMat, w: &[C64]) -> C64 {
    let v = &jet.v;
    let v_vbar = alg.bracket_with_conj(v, v).hol_part();
    let v_w = alg.bracket_hol(v, w);
    let v_wbar = alg.bracket_with_conj(v, w).hol_part();
    let nv = nk.mul_vec(v);
    jet.inner(w, &v_vbar) - jet.inner(&v_w, v) - jet.inner(v, &v_wbar) - s_hol(jet, &nv, w)
}

/// Probe vectors: the basis when `n ≤ 8`, seeded random unit vectors otherwise.
fn probe_vectors(n: usize, count: usize, seed: u64) -> Vec<Vec<C64>> {
    if n <= BASIS_PROBE_MAX_DIM {
        (0..n).map(|i| crate::algebra::HolVector::basis(n, i).0).collect()
    } else {
        sampling::unit_sphere(n, count.max(1), seed)
            .into_iter()
            .map(|v| v.0)
            .collect()
    }
}

fn kahler_at(alg: &ComplexifiedAlgebra, jet: &MetricJet, nk: &CMat, probes: &[Vec<C64>]) -> f64 {
    let mut worst: f64 = 0.0;
    if jet.dim() <= BASIS_PROBE_MAX_DIM {
        for u in probes {
            for w in probes {
                worst = worst.max(kahler_form(alg, jet, nk, u, w).norm());
            }
        }
    } else {
        for pair in probes.chunks(2) {
            let w = pair.last().unwrap();
            worst = worst.max(kahler_form(alg, jet, nk, &pair[0], w).norm());
        }
    }
    worst
}

fn weakly_at(alg: &ComplexifiedAlgebra, jet: &MetricJet, nk: &CMat, probes: &[Vec<C64>]) -> f64 {
    probes
        .iter()
        .map(|w| weakly_kahler_form(alg, jet, nk, w).norm())
        .fold(0.0, f64::max)
}

fn check_dims(alg: &ComplexifiedAlgebra, norm: &NormSpec) -> Result<()> {
    if alg.dim() != norm.dim() {
        return Err(Error::Input(format!(
            "algebra has complex dimension {} but the norm lives on C^{}",
            alg.dim(),
            norm.dim()
        )));
    }
    Ok(())
}

pub fn kahler_residual(
    alg: &ComplexifiedAlgebra,
    norm: &NormSpec,
    v: &[C64],
    probe_count: usize,
    seed: u64,
    cfg: &DiffConfig,
) -> Result<f64> {
    check_dims(alg, norm)?;
    let jet = metric_jet_order(norm, v, cfg, 3)?;
    let nk = solve_n(alg, &jet.fiber())?;
    Ok(kahler_at(
        alg,
        &jet,
        &nk,
        &probe_vectors(alg.dim(), 2 * probe_count, seed),
    ))
}

pub fn weakly_kahler_residual(
    alg: &ComplexifiedAlgebra,
    norm: &NormSpec,
    v: &[C64],
    probe_count: usize,
    seed: u64,
    cfg: &DiffConfig,
) -> Result<f64> {
    check_dims(alg, norm)?;
    let jet = metric_jet_order(norm, v, cfg, 3)?;
    let nk = solve_n(alg, &jet.fiber())?;
    Ok(weakly_at(alg, &jet, &nk, &probe_vectors(alg.dim(), probe_count, seed)))
}

/// `Γ` at the jet's direction and its Wirtinger derivatives
/// `dv[l] = ∂Γ/∂v^l`, `dvbar[l] = ∂Γ/∂v̄^l`. Needs a fourth-order jet.
pub fn gamma_derivatives(alg: &ComplexifiedAlgebra, jet: &MetricJet) -> Result<(Vec<Tensor3>, Vec<Tensor3>)> {
    if jet.taylor.order() < 4 {
        return Err(Error::Differentiation(
            "derivatives of Γ need a fourth-order jet".into(),
        ));
    }
    let n = alg.dim();
    let mut real = Vec::with_capacity(2 * n);
    for dir in 0..2 * n {
        let fiber = Fiber::<Dual<f64>>::seeded(&jet.taylor, &jet.v, dir);
        let nk = solve_n(alg, &fiber)?;
        let gamma = solve_gamma(alg, &fiber, &nk)?;
        real.push(Tensor3::from_fn(n, |a, b, c| {
            let z = gamma.get(a, b, c);
            C64::new(z.re.eps, z.im.eps)
        }));
    }
    let half_i = C64::new(0.0, 0.5);
    let dv = (0..n)
        .map(|l| {
            Tensor3::from_fn(n, |a, b, c| {
                real[l].get(a, b, c) * 0.5 - half_i * real[n + l].get(a, b, c)
            })
        })
        .collect();
    let dvbar = (0..n)
        .map(|l| {
            Tensor3::from_fn(n, |a, b, c| {
                real[l].get(a, b, c) * 0.5 + half_i * real[n + l].get(a, b, c)
            })
        })
        .collect();
    Ok((dv, dvbar))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BerwaldResidual {
    /// `max ‖Γ(v) - Γ(v')‖_∞` over sample pairs.
    pub spread: f64,
    /// `max ‖∂Γ/∂v‖_∞, ‖∂Γ/∂v̄‖_∞` over samples.
    pub derivative: f64,
    /// `spread + derivative`
    pub total: f64,
}

/// Per-direction quantities gathered once and reused by every criterion.
struct Sample {
    gamma: Tensor3,
    derivative: f64,
    kahler: f64,
    weakly: f64,
    data: ConnectionData,
    jet: MetricJet,
}

fn sample_at(
    alg: &ComplexifiedAlgebra,
    norm: &NormSpec,
    v: &[C64],
    probes: &[Vec<C64>],
    cfg: &DiffConfig,
) -> Result<Sample> {
    let jet = metric_jet_order(norm, v, cfg, 4)?;
    let data = connection(alg, &jet)?;
    let (dv, dvbar) = gamma_derivatives(alg, &jet)?;
    let derivative = dv.iter().chain(&dvbar).map(|t| t.max_abs()).fold(0.0, f64::max);
    Ok(Sample {
        gamma: data.gamma.clone(),
        derivative,
        kahler: kahler_at(alg, &jet, &data.n_hol, probes),
        weakly: weakly_at(alg, &jet, &data.n_hol, probes),
        data,
        jet,
    })
}

fn berwald_from(samples: &[Sample]) -> BerwaldResidual {
    let mut spread: f64 = 0.0;
    for (a, sa) in samples.iter().enumerate() {
        for sb in &samples[a + 1..] {
            spread = spread.max(sa.gamma.max_abs_diff(&sb.gamma));
        }
    }
    let derivative = samples.iter().map(|s| s.derivative).fold(0.0, f64::max);
    BerwaldResidual {
        spread,
        derivative,
        total: spread + derivative,
    }
}

/// Basis directions followed by `samples` seeded unit directions.
pub fn sample_directions(n: usize, samples: usize, seed: u64) -> Vec<Vec<C64>> {
    (0..n)
        .map(|i| crate::algebra::HolVector::basis(n, i).0)
        .chain(sampling::unit_sphere(n, samples, seed).into_iter().map(|v| v.0))
        .collect()
}

fn gather(alg: &ComplexifiedAlgebra, norm: &NormSpec, opts: &ClassifyOptions) -> Result<Vec<Sample>> {
    check_dims(alg, norm)?;
    opts.validate()?;
    let probes = probe_vectors(alg.dim(), 2 * opts.probes, opts.seed ^ 0x9e37_79b9_7f4a_7c15);
    sample_directions(alg.dim(), opts.samples, opts.seed)
        .iter()
        .map(|v| sample_at(alg, norm, v, &probes, &opts.diff))
        .collect()
}

pub fn berwald_residual(
    alg: &ComplexifiedAlgebra,
    norm: &NormSpec,
    sample_count: usize,
    seed: u64,
    cfg: &DiffConfig,
) -> Result<BerwaldResidual> {
    if sample_count < 2 {
        return Err(Error::Parameter(format!(
            "Berwald residual needs at least 2 samples, got {sample_count}"
        )));
    }
    check_dims(alg, norm)?;
    let samples = sampling::unit_sphere(alg.dim(), sample_count, seed)
        .iter()
        .map(|v| sample_at(alg, norm, v, &[], cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(berwald_from(&samples))
}

/// Largest `|B(v, w)|` with `v` over the samples and `w` over the basis and
/// the other samples.
fn bisectional_max(alg: &ComplexifiedAlgebra, samples: &[Sample]) -> Result<f64> {
    let n = alg.dim();
    let mut worst: f64 = 0.0;
    for s in samples {
        let curv = curvature_from_jet(alg, s.jet.clone())?;
        for w in (0..n)
            .map(|i| crate::algebra::HolVector::basis(n, i).0)
            .chain(samples.iter().map(|t| t.jet.v.clone()))
        {
            worst = worst.max(curv.bisectional(&w)?.value.abs());
        }
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ReportInvariants {
    /// `kahler ⇒ weakly_kahler_residual < 10 tol`
    pub kahler_implies_weakly: bool,
    /// `complex-group type ⇒ Berwald and bisectional_max < tol`
    pub complex_group_rigidity: bool,
    /// `complex-group type ⇒ (Kähler ⇔ abelian)`
    pub kahler_iff_abelian: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub kahler_residual: f64,
    pub weakly_kahler_residual: f64,
    pub berwald_residual: f64,
    pub berwald: BerwaldResidual,
    pub bisectional_max: f64,
    pub is_complex_group_type: bool,
    pub is_abelian: bool,
    pub kahler: bool,
    pub weakly_kahler: bool,
    pub is_berwald: bool,
    pub kahler_berwald: bool,
    pub invariants: ReportInvariants,
    pub tol: f64,
    pub directions: usize,
    pub probes_per_direction: usize,
    pub seed: u64,
}

pub fn classify(alg: &ComplexifiedAlgebra, norm: &NormSpec, opts: &ClassifyOptions) -> Result<ClassificationReport> {
    let samples = gather(alg, norm, opts)?;
    let tol = opts.tol;
    let kahler_residual = samples.iter().map(|s| s.kahler).fold(0.0, f64::max);
    let weakly_kahler_residual = samples.iter().map(|s| s.weakly).fold(0.0, f64::max);
    let berwald = berwald_from(&samples);
    let bisectional_max = bisectional_max(alg, &samples)?;
    let is_complex_group_type = alg.is_complex_group_type().0;
    let is_abelian = alg.is_abelian();
    let kahler = kahler_residual < tol;
    let weakly_kahler = weakly_kahler_residual < tol;
    let is_berwald = berwald.total < tol;
    let n = alg.dim();
    Ok(ClassificationReport {
        kahler_residual,
        weakly_kahler_residual,
        berwald_residual: berwald.total,
        berwald,
        bisectional_max,
        is_complex_group_type,
        is_abelian,
        kahler,
        weakly_kahler,
        is_berwald,
        kahler_berwald: kahler && is_berwald,
        invariants: ReportInvariants {
            kahler_implies_weakly: !kahler || weakly_kahler_residual < 10.0 * tol,
            complex_group_rigidity: !is_complex_group_type || (is_berwald && bisectional_max < tol),
            kahler_iff_abelian: !is_complex_group_type || kahler == is_abelian,
        },
        tol,
        directions: samples.len(),
        probes_per_direction: if n <= BASIS_PROBE_MAX_DIM { n * n } else { opts.probes },
        seed: opts.seed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub gamma_max: f64,
    pub bisectional_max: f64,
    pub torsion_vs_minus_half_lambda_residual: f64,
    pub berwald_residual: f64,
    pub kahler_residual: f64,
    pub kahler: bool,
    pub is_abelian: bool,
    pub kahler_iff_abelian_consistent: bool,
    pub pass: bool,
    pub tol: f64,
    pub directions: usize,
    pub seed: u64,
}

/// For algebras with vanishing mixed brackets: Γ ≡ 0, the metric is Berwald
/// with vanishing bisectional curvature, `T = -½ λ`, and Kähler iff abelian.
pub fn verify_complex_group_theorems(
    alg: &ComplexifiedAlgebra,
    norm: &NormSpec,
    opts: &ClassifyOptions,
) -> Result<TheoremReport> {
    let (is_cg, magnitude) = alg.is_complex_group_type();
    if !is_cg {
        let entry = alg
            .largest_mixed_entry()
            .map(|(label, _)| label)
            .unwrap_or_else(|| "mixed block".to_string());
        return Err(Error::NotComplexGroup { entry, magnitude });
    }
    let samples = gather(alg, norm, opts)?;
    let n = alg.dim();
    let gamma_max = samples.iter().map(|s| s.gamma.max_abs()).fold(0.0, f64::max);
    let mut torsion: f64 = 0.0;
    for s in &samples {
        let expected = Tensor3::from_fn(n, |j, i, k| alg.lambda(j, i, k) * -0.5);
        torsion = torsion.max(s.data.torsion.max_abs_diff(&expected));
    }
    let bisectional_max = bisectional_max(alg, &samples)?;
    let berwald = berwald_from(&samples);
    let kahler_residual = samples.iter().map(|s| s.kahler).fold(0.0, f64::max);
    let tol = opts.tol;
    let kahler = kahler_residual < tol;
    let is_abelian = alg.is_abelian();
    let consistent = kahler == is_abelian;
    let pass =
        gamma_max < tol && bisectional_max < BISECTIONAL_TOL && torsion < tol && berwald.total < tol && consistent;
    Ok(TheoremReport {
        gamma_max,
        bisectional_max,
        torsion_vs_minus_half_lambda_residual: torsion,
        berwald_residual: berwald.total,
        kahler_residual,
        kahler,
        is_abelian,
        kahler_iff_abelian_consistent: consistent,
        pass,
        tol,
        directions: samples.len(),
        seed: opts.seed,
    })
}
