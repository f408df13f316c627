use num_complex::Complex;
use serde::Serialize;

use super::real::{AlmostComplexStructure, RealLieAlgebra};
use super::{HolVector, MixedVector, STRUCTURAL_TOL};
use crate::error::{Error, Result};
use crate::linalg::{CMat, Tensor3, C64};

/// One structure constant `λ^i_{jk}` (0-based indices).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StructureConstant {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    #[serde(serialize_with = "crate::json::complex")]
    pub value: C64,
}

/// The complexified algebra `g^C = g^{1,0} ⊕ g^{0,1}` in a basis `e_i` of
/// `g^{1,0}`:
///
/// ```text
/// [e_j, e_k] = λ^i_{jk} e_i
/// [e_j, ē_k] = λ^i_{jk̄} e_i + λ^{ī}_{jk̄} ē_i
/// ```
///
/// Only these three blocks are stored. Brackets involving `ē` on the left
/// follow from conjugation and antisymmetry.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexifiedAlgebra {
    n: usize,
    hol: Tensor3,
    mixed_hol: Tensor3,
    mixed_anti: Tensor3,
    /// `[b_p, b_q] = full[r][p][q] b_r` over `b = (e_1..e_n, ē_1..ē_n)`.
    full: Tensor3,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexValidationReport {
    /// `max |λ^i_{jk} + λ^i_{kj}|`
    pub antisymmetry_residual: f64,
    /// `max |λ^{ī}_{jk̄} + conj(λ^i_{kj̄})|`, i.e. `[ē_j, e_k]` computed by
    /// conjugation agrees with `-[e_k, ē_j]`.
    pub conjugation_residual: f64,
    pub jacobi_residual: f64,
    pub pass: bool,
}

impl ComplexifiedAlgebra {
    /// `hol[i][j][k] = λ^i_{jk}`, `mixed_hol[i][j][k] = λ^i_{jk̄}`,
    /// `mixed_anti[i][j][k] = λ^{ī}_{jk̄}`.
    pub fn from_dense(hol: Tensor3, mixed_hol: Tensor3, mixed_anti: Tensor3) -> Self {
        let n = hol.dim();
        assert!(mixed_hol.dim() == n && mixed_anti.dim() == n, "block dimensions differ");
        let full = Tensor3::from_fn(2 * n, |r, p, q| {
            let (rh, ri) = (r < n, r % n);
            let (ph, pi) = (p < n, p % n);
            let (qh, qi) = (q < n, q % n);
            match (ph, qh) {
                (true, true) => {
                    if rh {
                        hol.get(ri, pi, qi)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                }
                (false, false) => {
                    if rh {
                        C64::new(0.0, 0.0)
                    } else {
                        hol.get(ri, pi, qi).conj()
                    }
                }
                (true, false) => {
                    if rh {
                        mixed_hol.get(ri, pi, qi)
                    } else {
                        mixed_anti.get(ri, pi, qi)
                    }
                }
                // [ē_j, e_k] = conj([e_j, ē_k])
                (false, true) => {
                    if rh {
                        mixed_anti.get(ri, pi, qi).conj()
                    } else {
                        mixed_hol.get(ri, pi, qi).conj()
                    }
                }
            }
        });
        ComplexifiedAlgebra {
            n,
            hol,
            mixed_hol,
            mixed_anti,
            full,
        }
    }

    /// Builds from sparse entries. `hol` lists `[e_j, e_k] = λ^i_{jk} e_i`
    /// with `j < k` only; the `(k, j)` partner is filled by antisymmetry.
    pub fn from_entries(
        n: usize,
        hol: &[StructureConstant],
        mixed_hol: &[StructureConstant],
        mixed_anti: &[StructureConstant],
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("complex dimension must be positive".into()));
        }
        let check = |e: &StructureConstant, block: &str| -> Result<()> {
            if e.i >= n || e.j >= n || e.k >= n {
                return Err(Error::Input(format!(
                    "{block}: index ({}, {}, {}) out of range for n = {n}",
                    e.i + 1,
                    e.j + 1,
                    e.k + 1
                )));
            }
            if !(e.value.re.is_finite() && e.value.im.is_finite()) {
                return Err(Error::Input(format!("{block}: non-finite value")));
            }
            Ok(())
        };
        let mut h = Tensor3::zeros(n);
        for e in hol {
            check(e, "lambda_hol")?;
            if e.j >= e.k {
                return Err(Error::Input(format!(
                    "lambda_hol entries must have j < k, got j = {}, k = {}",
                    e.j + 1,
                    e.k + 1
                )));
            }
            h.set(e.i, e.j, e.k, h.get(e.i, e.j, e.k) + e.value);
            h.set(e.i, e.k, e.j, h.get(e.i, e.k, e.j) - e.value);
        }
        let mut mh = Tensor3::zeros(n);
        for e in mixed_hol {
            check(e, "lambda_mixed_hol")?;
            mh.set(e.i, e.j, e.k, mh.get(e.i, e.j, e.k) + e.value);
        }
        let mut ma = Tensor3::zeros(n);
        for e in mixed_anti {
            check(e, "lambda_mixed_anti")?;
            ma.set(e.i, e.j, e.k, ma.get(e.i, e.j, e.k) + e.value);
        }
        Ok(Self::from_dense(h, mh, ma))
    }

    pub fn abelian(n: usize) -> Self {
        Self::from_dense(Tensor3::zeros(n), Tensor3::zeros(n), Tensor3::zeros(n))
    }

    /// Zeroes entries with magnitude below `eps` (removes roundoff dust).
    pub(crate) fn chop(self, eps: f64) -> Self {
        let n = self.n;
        let clean = |t: &Tensor3| {
            Tensor3::from_fn(n, |a, b, c| {
                let z = t.get(a, b, c);
                let re = if z.re.abs() < eps { 0.0 } else { z.re };
                let im = if z.im.abs() < eps { 0.0 } else { z.im };
                C64::new(re, im)
            })
        };
        Self::from_dense(clean(&self.hol), clean(&self.mixed_hol), clean(&self.mixed_anti))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    /// `λ^i_{jk}`
    #[inline]
    pub fn lambda(&self, i: usize, j: usize, k: usize) -> C64 {
        self.hol.get(i, j, k)
    }

    /// `λ^i_{jk̄}`: `e_i` component of `[e_j, ē_k]`.
    #[inline]
    pub fn lambda_mixed_hol(&self, i: usize, j: usize, k: usize) -> C64 {
        self.mixed_hol.get(i, j, k)
    }

    /// `λ^{ī}_{jk̄}`: `ē_i` component of `[e_j, ē_k]`.
    #[inline]
    pub fn lambda_mixed_anti(&self, i: usize, j: usize, k: usize) -> C64 {
        self.mixed_anti.get(i, j, k)
    }

    /// `λ^{t̄}_{j̄k}`: `ē_t` component of `[ē_j, e_k]`, derived as
    /// `conj(λ^t_{jk̄})`.
    #[inline]
    pub fn lambda_conj_mixed(&self, t: usize, j: usize, k: usize) -> C64 {
        self.mixed_hol.get(t, j, k).conj()
    }

    pub fn hol_block(&self) -> &Tensor3 {
        &self.hol
    }

    pub fn mixed_hol_block(&self) -> &Tensor3 {
        &self.mixed_hol
    }

    pub fn mixed_anti_block(&self) -> &Tensor3 {
        &self.mixed_anti
    }

    /// Structure constants over the full basis `(e_1..e_n, ē_1..ē_n)`.
    pub fn full_table(&self) -> &Tensor3 {
        &self.full
    }

    /// Nonzero `λ^i_{jk}` with `j < k`.
    pub fn hol_entries(&self) -> Vec<StructureConstant> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in j + 1..n {
                    let value = self.hol.get(i, j, k);
                    if value.norm() > 0.0 {
                        out.push(StructureConstant { i, j, k, value });
                    }
                }
            }
        }
        out
    }

    fn block_entries(t: &Tensor3) -> Vec<StructureConstant> {
        let n = t.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let value = t.get(i, j, k);
                    if value.norm() > 0.0 {
                        out.push(StructureConstant { i, j, k, value });
                    }
                }
            }
        }
        out
    }

    pub fn mixed_hol_entries(&self) -> Vec<StructureConstant> {
        Self::block_entries(&self.mixed_hol)
    }

    pub fn mixed_anti_entries(&self) -> Vec<StructureConstant> {
        Self::block_entries(&self.mixed_anti)
    }

    pub fn validate(&self) -> ComplexValidationReport {
        let n = self.n;
        let mut anti: f64 = 0.0;
        let mut conj: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    anti = anti.max((self.hol.get(i, j, k) + self.hol.get(i, k, j)).norm());
                    conj = conj.max((self.mixed_anti.get(i, j, k) + self.mixed_hol.get(i, k, j).conj()).norm());
                }
            }
        }
        let m = 2 * n;
        let f = &self.full;
        let mut jac: f64 = 0.0;
        for p in 0..m {
            for q in 0..m {
                for r in 0..m {
                    for l in 0..m {
                        let mut s = C64::new(0.0, 0.0);
                        for x in 0..m {
                            s += f.get(x, p, q) * f.get(l, x, r)
                                + f.get(x, q, r) * f.get(l, x, p)
                                + f.get(x, r, p) * f.get(l, x, q);
                        }
                        jac = jac.max(s.norm());
                    }
                }
            }
        }
        ComplexValidationReport {
            antisymmetry_residual: anti,
            conjugation_residual: conj,
            jacobi_residual: jac,
            pass: anti < STRUCTURAL_TOL && conj < STRUCTURAL_TOL && jac < STRUCTURAL_TOL,
        }
    }

    /// Bilinear bracket on `g^C`.
    pub fn bracket(&self, a: &MixedVector, b: &MixedVector) -> MixedVector {
        let n = self.n;
        let m = 2 * n;
        let ca = a.stacked();
        let cb = b.stacked();
        let mut out = vec![C64::new(0.0, 0.0); m];
        for p in 0..m {
            if ca[p].norm_sqr() == 0.0 {
                continue;
            }
            for q in 0..m {
                let w = ca[p] * cb[q];
                if w.norm_sqr() == 0.0 {
                    continue;
                }
                for (r, o) in out.iter_mut().enumerate() {
                    *o += w * self.full.get(r, p, q);
                }
            }
        }
        MixedVector::from_stacked(n, out)
    }

    /// `[u, w]` for `u, w ∈ g^{1,0}`; always of type (1,0).
    pub fn bracket_hol(&self, u: &[C64], w: &[C64]) -> HolVector {
        let n = self.n;
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (i, o) in out.iter_mut().enumerate() {
            for j in 0..n {
                for k in 0..n {
                    *o += self.hol.get(i, j, k) * u[j] * w[k];
                }
            }
        }
        HolVector(out)
    }

    /// `[u, w̄]` for `u, w ∈ g^{1,0}`.
    pub fn bracket_with_conj(&self, u: &[C64], w: &[C64]) -> MixedVector {
        let n = self.n;
        let mut hol = vec![C64::new(0.0, 0.0); n];
        let mut anti = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let c = u[j] * w[k].conj();
                    hol[i] += self.mixed_hol.get(i, j, k) * c;
                    anti[i] += self.mixed_anti.get(i, j, k) * c;
                }
            }
        }
        MixedVector { hol, anti }
    }

    /// Returns `(flag, max |mixed entry|)`; the flag says `[g^{1,0}, g^{0,1}] = 0`.
    pub fn is_complex_group_type(&self) -> (bool, f64) {
        let m = self.mixed_hol.max_abs().max(self.mixed_anti.max_abs());
        (m < STRUCTURAL_TOL, m)
    }

    /// Largest mixed-block entry, labelled for error messages.
    pub fn largest_mixed_entry(&self) -> Option<(String, f64)> {
        let mut best: Option<(String, f64)> = None;
        for (bar, t) in [("", &self.mixed_hol), ("bar", &self.mixed_anti)] {
            for e in Self::block_entries(t) {
                let mag = e.value.norm();
                if best.as_ref().is_none_or(|b| mag > b.1) {
                    let name = format!("lambda^{}{}_({},{}bar)", e.i + 1, bar, e.j + 1, e.k + 1);
                    best = Some((name, mag));
                }
            }
        }
        best
    }

    /// All structure constants vanish to structural tolerance.
    pub fn is_abelian(&self) -> bool {
        self.hol.max_abs() < STRUCTURAL_TOL && self.is_complex_group_type().0
    }

    /// Real form `(g, I)` with basis `(f_1..f_n, I f_1..I f_n)` where
    /// `e_i = w_i (f_i - √-1 I f_i)`. Inverse of [`super::complexify`] for the
    /// same weights.
    pub fn decomplexify(&self, weights: Option<&[f64]>) -> Result<(RealLieAlgebra, AlmostComplexStructure)> {
        let n = self.n;
        let default_w = vec![std::f64::consts::FRAC_1_SQRT_2; n];
        let w = weights.unwrap_or(&default_w);
        if w.len() != n || w.iter().any(|x| !(*x > 0.0)) {
            return Err(Error::Parameter(format!("need {n} positive basis weights")));
        }
        // Real basis vectors written over (e, ē):
        //   f_i   = (e_i + ē_i) / (2 w_i)
        //   I f_i = √-1 (e_i - ē_i) / (2 w_i)
        let m = 2 * n;
        let real_basis: Vec<MixedVector> = (0..m)
            .map(|a| {
                let i = a % n;
                let s = 1.0 / (2.0 * w[i]);
                let mut hol = vec![C64::new(0.0, 0.0); n];
                let mut anti = vec![C64::new(0.0, 0.0); n];
                if a < n {
                    hol[i] = C64::new(s, 0.0);
                    anti[i] = C64::new(s, 0.0);
                } else {
                    hol[i] = C64::new(0.0, s);
                    anti[i] = C64::new(0.0, -s);
                }
                MixedVector { hol, anti }
            })
            .collect();
        let to_real = CMat::from_fn(m, |r, c| real_basis[c].stacked()[r]);
        let lu = to_real.lu()?;
        let mut entries = Vec::new();
        let mut imag: f64 = 0.0;
        for a in 0..m {
            for b in 0..m {
                let br = self.bracket(&real_basis[a], &real_basis[b]);
                let coeffs = lu.solve(&br.stacked());
                for (k, z) in coeffs.iter().enumerate() {
                    imag = imag.max(z.im.abs());
                    if z.re.abs() > 1e-15 {
                        entries.push(((k, a, b), z.re));
                    }
                }
            }
        }
        if imag > 1e-10 {
            return Err(Error::Input(format!(
                "algebra has no real form in this basis (imaginary residue {imag:.3e})"
            )));
        }
        let alg = RealLieAlgebra::new(m, entries)?;
        let mut rows = vec![vec![0.0; m]; m];
        for i in 0..n {
            rows[n + i][i] = 1.0;
            rows[i][n + i] = -1.0;
        }
        Ok((alg, AlmostComplexStructure::new(rows)?))
    }
}

/// Convenience: `Complex::new(re, im)`.
#[inline]
pub(crate) fn cx(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}
