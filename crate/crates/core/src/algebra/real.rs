use std::collections::BTreeMap;

use num_complex::Complex;
use serde::Serialize;

use super::complexified::ComplexifiedAlgebra;
use super::{INTEGRABILITY_TOL, STRUCTURAL_TOL};
use crate::error::{Error, Result};
use crate::linalg::{CMat, Tensor3, C64};

/// `(i, j, [(k, c^k_{ij})])`
pub type Bracket<'a> = (usize, usize, &'a [(usize, f64)]);

/// Real Lie algebra of even dimension given by `c^k_{ij}` with
/// `[X_i, X_j] = c^k_{ij} X_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealLieAlgebra {
    dim: usize,
    entries: BTreeMap<(usize, usize, usize), f64>,
    dense: Vec<f64>,
}

impl RealLieAlgebra {
    /// Builds from raw `((k, i, j), c^k_{ij})` entries, 0-based. Entries are
    /// taken as given; antisymmetry is checked by [`validate_real`], not
    /// imposed. Repeated keys accumulate.
    pub fn new(dim: usize, entries: impl IntoIterator<Item = ((usize, usize, usize), f64)>) -> Result<Self> {
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::Input(format!(
                "real dimension must be positive and even, got {dim}"
            )));
        }
        let mut map = BTreeMap::new();
        for ((k, i, j), val) in entries {
            if k >= dim || i >= dim || j >= dim {
                return Err(Error::Input(format!(
                    "structure constant index ({k}, {i}, {j}) out of range for dimension {dim}"
                )));
            }
            if !val.is_finite() {
                return Err(Error::Input(format!(
                    "non-finite structure constant at ({k}, {i}, {j})"
                )));
            }
            *map.entry((k, i, j)).or_insert(0.0) += val;
        }
        map.retain(|_, v| *v != 0.0);
        let mut dense = vec![0.0; dim * dim * dim];
        for (&(k, i, j), &v) in &map {
            dense[(k * dim + i) * dim + j] = v;
        }
        Ok(RealLieAlgebra {
            dim,
            entries: map,
            dense,
        })
    }

    /// Builds from brackets `[X_i, X_j] = Σ val·X_k` given once per unordered
    /// pair; the `(j, i)` partner is filled by antisymmetry.
    pub fn from_brackets(dim: usize, brackets: &[Bracket<'_>]) -> Result<Self> {
        let mut entries = Vec::new();
        for &(i, j, terms) in brackets {
            for &(k, val) in terms {
                entries.push(((k, i, j), val));
                entries.push(((k, j, i), -val));
            }
        }
        Self::new(dim, entries)
    }

    pub fn abelian(dim: usize) -> Result<Self> {
        Self::new(dim, std::iter::empty())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `c^k_{ij}`.
    #[inline]
    pub fn c(&self, k: usize, i: usize, j: usize) -> f64 {
        self.dense[(k * self.dim + i) * self.dim + j]
    }

    /// Nonzero entries keyed by `(k, i, j)`.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize, usize), f64)> + '_ {
        self.entries.iter().map(|(&key, &v)| (key, v))
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut out = vec![0.0; d];
        for (&(k, i, j), &c) in &self.entries {
            out[k] += c * x[i] * y[j];
        }
        debug_assert_eq!(out.len(), d);
        out
    }

    /// Bracket of the complex-linear extension to `g ⊗ C`.
    pub fn bracket_complex(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.dim];
        for (&(k, i, j), &c) in &self.entries {
            out[k] += x[i] * y[j] * c;
        }
        out
    }
}

/// Real endomorphism `I` of `g` with `I² = -Id`, stored as the matrix acting
/// on coordinate columns, so column `b` is the image of `X_b`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlmostComplexStructure {
    dim: usize,
    m: Vec<f64>,
}

impl AlmostComplexStructure {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || !dim.is_multiple_of(2) || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Input(format!(
                "almost complex structure must be a square matrix of even size, got {dim} rows"
            )));
        }
        let m: Vec<f64> = rows.into_iter().flatten().collect();
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::Input("almost complex structure has non-finite entries".into()));
        }
        let acs = AlmostComplexStructure { dim, m };
        let res = acs.square_residual();
        if res > STRUCTURAL_TOL {
            return Err(Error::Input(format!("I∘I ≠ -Id: max entry residual {res:.3e}")));
        }
        Ok(acs)
    }

    /// Standard structure on `R^{2n}` with `I X_{2k} = X_{2k+1}` (0-based pairs).
    pub fn standard(dim: usize) -> Result<Self> {
        let mut rows = vec![vec![0.0; dim]; dim];
        for k in (0..dim).step_by(2) {
            if k + 1 < dim {
                rows[k + 1][k] = 1.0;
                rows[k][k + 1] = -1.0;
            }
        }
        Self::new(rows)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.m[row * self.dim + col]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.m.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.entry(r, c) * x[c]).sum())
            .collect()
    }

    pub fn apply_complex(&self, x: &[C64]) -> Vec<C64> {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| x[c] * self.entry(r, c)).sum())
            .collect()
    }

    /// `max |(I·I + Id)_{rc}|`.
    pub fn square_residual(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for r in 0..d {
            for c in 0..d {
                let mut s: f64 = (0..d).map(|k| self.entry(r, k) * self.entry(k, c)).sum();
                if r == c {
                    s += 1.0;
                }
                worst = worst.max(s.abs());
            }
        }
        worst
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub antisymmetry_residual: f64,
    pub jacobi_residual: f64,
    pub pass: bool,
}

pub fn validate_real(alg: &RealLieAlgebra) -> ValidationReport {
    let d = alg.dim();
    let mut anti: f64 = 0.0;
    for k in 0..d {
        for i in 0..d {
            for j in 0..d {
                anti = anti.max((alg.c(k, i, j) + alg.c(k, j, i)).abs());
            }
        }
    }
    let mut jac: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let s: f64 = (0..d)
                        .map(|m| {
                            alg.c(m, i, j) * alg.c(l, m, k)
                                + alg.c(m, j, k) * alg.c(l, m, i)
                                + alg.c(m, k, i) * alg.c(l, m, j)
                        })
                        .sum();
                    jac = jac.max(s.abs());
                }
            }
        }
    }
    ValidationReport {
        antisymmetry_residual: anti,
        jacobi_residual: jac,
        pass: anti < STRUCTURAL_TOL && jac < STRUCTURAL_TOL,
    }
}

/// Nijenhuis torsion `N_I(X_a, X_b)` on all basis pairs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NijenhuisReport {
    /// `tensor[a][b]` is the coordinate vector of `N_I(X_a, X_b)`.
    pub tensor: Vec<Vec<Vec<f64>>>,
    pub max_abs: f64,
    pub worst_pair: (usize, usize),
    pub integrable: bool,
}

fn check_dims(alg: &RealLieAlgebra, acs: &AlmostComplexStructure) -> Result<()> {
    if alg.dim() != acs.dim() {
        return Err(Error::Input(format!(
            "algebra has dimension {} but I is {}×{}",
            alg.dim(),
            acs.dim(),
            acs.dim()
        )));
    }
    Ok(())
}

pub fn nijenhuis(alg: &RealLieAlgebra, acs: &AlmostComplexStructure) -> Result<NijenhuisReport> {
    check_dims(alg, acs)?;
    let d = alg.dim();
    let basis = |a: usize| {
        let mut e = vec![0.0; d];
        e[a] = 1.0;
        e
    };
    let mut tensor = vec![vec![vec![0.0; d]; d]; d];
    let (mut max_abs, mut worst_pair) = (0.0_f64, (0, 0));
    for a in 0..d {
        for b in 0..d {
            let (x, y) = (basis(a), basis(b));
            let (ix, iy) = (acs.apply(&x), acs.apply(&y));
            let t1 = alg.bracket(&x, &y);
            let t2 = alg.bracket(&ix, &iy);
            let t3 = acs.apply(&alg.bracket(&ix, &y));
            let t4 = acs.apply(&alg.bracket(&x, &iy));
            for k in 0..d {
                let val = t1[k] - t2[k] + t3[k] + t4[k];
                tensor[a][b][k] = val;
                if val.abs() > max_abs {
                    max_abs = val.abs();
                    worst_pair = (a, b);
                }
            }
        }
    }
    Ok(NijenhuisReport {
        tensor,
        max_abs,
        worst_pair,
        integrable: max_abs < INTEGRABILITY_TOL,
    })
}

/// Picks real vectors `f_1..f_n` such that `{f_i, I f_i}` is a basis of `g`,
/// scanning the coordinate basis in order.
pub fn holomorphic_generators(acs: &AlmostComplexStructure) -> Vec<Vec<f64>> {
    let d = acs.dim();
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    let mut chosen = Vec::new();
    let reduce = |ortho: &[Vec<f64>], x: &[f64]| -> Vec<f64> {
        let mut r = x.to_vec();
        for q in ortho {
            let dot: f64 = r.iter().zip(q).map(|(a, b)| a * b).sum();
            r.iter_mut().zip(q).for_each(|(a, b)| *a -= dot * b);
        }
        r
    };
    for a in 0..d {
        if chosen.len() == d / 2 {
            break;
        }
        let mut x = vec![0.0; d];
        x[a] = 1.0;
        let r = reduce(&ortho, &x);
        let nrm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if nrm < 1e-8 {
            continue;
        }
        chosen.push(x.clone());
        ortho.push(r.iter().map(|v| v / nrm).collect());
        let ri = reduce(&ortho, &acs.apply(&x));
        let nrm_i = ri.iter().map(|v| v * v).sum::<f64>().sqrt();
        ortho.push(ri.iter().map(|v| v / nrm_i).collect());
    }
    chosen
}

/// Complexifies `(g, I)` using the basis `E_i = w_i (f_i - √-1 I f_i)` of
/// `g^{1,0}`, with the `f_i` from [`holomorphic_generators`] and weights
/// `w_i` (default `1/√2`).
pub fn complexify(
    alg: &RealLieAlgebra,
    acs: &AlmostComplexStructure,
    weights: Option<&[f64]>,
) -> Result<ComplexifiedAlgebra> {
    check_dims(alg, acs)?;
    let report = validate_real(alg);
    if !report.pass {
        return Err(Error::Input(format!(
            "real algebra fails validation (antisymmetry {:.3e}, Jacobi {:.3e})",
            report.antisymmetry_residual, report.jacobi_residual
        )));
    }
    let nij = nijenhuis(alg, acs)?;
    if !nij.integrable {
        return Err(Error::Integrability {
            max_residual: nij.max_abs,
            a: nij.worst_pair.0 + 1,
            b: nij.worst_pair.1 + 1,
        });
    }
    let d = alg.dim();
    let n = d / 2;
    let default_w = vec![std::f64::consts::FRAC_1_SQRT_2; n];
    let w = weights.unwrap_or(&default_w);
    if w.len() != n || w.iter().any(|x| !(*x > 0.0) || !x.is_finite()) {
        return Err(Error::Parameter(format!("need {n} positive basis weights")));
    }
    let gens = holomorphic_generators(acs);
    let e: Vec<Vec<C64>> = gens
        .iter()
        .zip(w)
        .map(|(f, &wi)| {
            let jf = acs.apply(f);
            f.iter().zip(&jf).map(|(&a, &b)| Complex::new(a, -b) * wi).collect()
        })
        .collect();
    let ebar: Vec<Vec<C64>> = e.iter().map(|v| v.iter().map(|z| z.conj()).collect()).collect();
    // Columns E_1..E_n, Ē_1..Ē_n.
    let basis = CMat::from_fn(d, |r, c| if c < n { e[c][r] } else { ebar[c - n][r] });
    let lu = basis.lu()?;

    let mut hol = Tensor3::zeros(n);
    let mut mixed_hol = Tensor3::zeros(n);
    let mut mixed_anti = Tensor3::zeros(n);
    let mut closure: f64 = 0.0;
    for j in 0..n {
        for k in 0..n {
            let coeffs = lu.solve(&alg.bracket_complex(&e[j], &e[k]));
            for i in 0..n {
                hol.set(i, j, k, coeffs[i]);
                closure = closure.max(coeffs[n + i].norm());
            }
            let coeffs = lu.solve(&alg.bracket_complex(&e[j], &ebar[k]));
            for i in 0..n {
                mixed_hol.set(i, j, k, coeffs[i]);
                mixed_anti.set(i, j, k, coeffs[n + i]);
            }
        }
    }
    if closure > INTEGRABILITY_TOL {
        return Err(Error::Closure(closure));
    }
    Ok(ComplexifiedAlgebra::from_dense(hol, mixed_hol, mixed_anti).chop(1e-15))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch2_real(beta: f64, gamma: f64) -> (RealLieAlgebra, AlmostComplexStructure) {
        // X, Y, Z, W = 0, 1, 2, 3
        let alg = RealLieAlgebra::from_brackets(
            4,
            &[
                (0, 1, &[(1, 0.5)]),
                (0, 2, &[(2, 0.5)]),
                (0, 3, &[(3, 1.0)]),
                (2, 1, &[(3, 1.0)]),
            ],
        )
        .unwrap();
        let mut rows = vec![vec![0.0; 4]; 4];
        rows[3][0] = (gamma / beta).sqrt();
        rows[2][1] = -1.0;
        rows[1][2] = 1.0;
        rows[0][3] = -(beta / gamma).sqrt();
        (alg, AlmostComplexStructure::new(rows).unwrap())
    }

    #[test]
    fn ch2_is_a_lie_algebra() {
        let (alg, _) = ch2_real(1.0, 1.0);
        assert!(validate_real(&alg).pass);
    }

    #[test]
    fn abelian_passes_validation() {
        assert!(validate_real(&RealLieAlgebra::abelian(4).unwrap()).pass);
    }

    #[test]
    fn symmetric_bracket_fails_antisymmetry() {
        let alg = RealLieAlgebra::new(2, [((0, 0, 1), 1.0), ((0, 1, 0), 1.0)]).unwrap();
        let rep = validate_real(&alg);
        assert!(!rep.pass);
        assert_eq!(rep.antisymmetry_residual, 2.0);
    }

    #[test]
    fn odd_dimension_rejected() {
        assert!(matches!(RealLieAlgebra::abelian(3), Err(Error::Input(_))));
        assert!(matches!(
            RealLieAlgebra::new(2, [((2, 0, 1), 1.0)]),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn invalid_structure_rejected() {
        assert!(AlmostComplexStructure::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).is_err());
        assert!(AlmostComplexStructure::new(vec![vec![0.0, -1.0, 0.0]]).is_err());
    }

    #[test]
    fn ch2_structure_is_integrable_for_several_parameters() {
        for (b, g) in [(1.0, 1.0), (0.5, 2.0), (3.0, 0.7)] {
            let (alg, acs) = ch2_real(b, g);
            let rep = nijenhuis(&alg, &acs).unwrap();
            assert!(rep.max_abs < 1e-12, "beta={b} gamma={g}: {}", rep.max_abs);
            assert!(rep.integrable);
        }
    }

    #[test]
    fn generators_for_ch2_are_x_and_y() {
        let (_, acs) = ch2_real(1.0, 1.0);
        let g = holomorphic_generators(&acs);
        assert_eq!(g, vec![vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0, 0.0]]);
    }

    #[test]
    fn complexify_rejects_dimension_mismatch() {
        let alg = RealLieAlgebra::abelian(4).unwrap();
        let acs = AlmostComplexStructure::standard(2).unwrap();
        assert!(complexify(&alg, &acs, None).is_err());
    }

    #[test]
    fn complexify_rejects_bad_weights() {
        let alg = RealLieAlgebra::abelian(4).unwrap();
        let acs = AlmostComplexStructure::standard(4).unwrap();
        assert!(matches!(
            complexify(&alg, &acs, Some(&[1.0, -1.0])),
            Err(Error::Parameter(_))
        ));
    }
}
