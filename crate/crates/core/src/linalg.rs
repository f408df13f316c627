//! Small dense complex matrices and rank-3 tensors, generic over [`Scalar`]
//! so the same elimination code runs on `f64` and on dual numbers.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{complex_value, Scalar};

pub type C64 = Complex<f64>;

/// Row-major square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat<S = f64> {
    n: usize,
    data: Vec<Complex<S>>,
}

impl<S: Scalar> CMat<S> {
    pub fn zeros(n: usize) -> Self {
        CMat {
            n,
            data: vec![Complex::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { Complex::one() } else { Complex::zero() })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex<S>) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        CMat { n, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<S> {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: Complex<S>) {
        self.data[i * self.n + j] = z;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        Self::from_fn(n, |i, j| {
            let mut acc = Complex::zero();
            for k in 0..n {
                acc = acc + self.get(i, k) * other.get(k, j);
            }
            acc
        })
    }

    pub fn mul_vec(&self, x: &[Complex<S>]) -> Vec<Complex<S>> {
        (0..self.n)
            .map(|i| {
                let mut acc = Complex::zero();
                for (j, xj) in x.iter().enumerate() {
                    acc = acc + self.get(i, j) * *xj;
                }
                acc
            })
            .collect()
    }

    /// LU factorization with partial pivoting on the `f64` magnitude.
    pub fn lu(&self) -> Result<Lu<S>> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = self
            .data
            .iter()
            .map(|z| complex_value(z).norm())
            .fold(0.0_f64, f64::max);
        for col in 0..n {
            let (mut best, mut best_mag) = (col, -1.0);
            for row in col..n {
                let mag = complex_value(&a[row * n + col]).norm();
                if mag > best_mag {
                    best = row;
                    best_mag = mag;
                }
            }
            if !(best_mag > scale * 1e-14) || best_mag == 0.0 {
                return Err(Error::Singular(best_mag.max(0.0)));
            }
            if best != col {
                for k in 0..n {
                    a.swap(col * n + k, best * n + k);
                }
                perm.swap(col, best);
            }
            let pivot = a[col * n + col];
            for row in col + 1..n {
                let factor = a[row * n + col] / pivot;
                a[row * n + col] = factor;
                for k in col + 1..n {
                    let upd = factor * a[col * n + k];
                    a[row * n + k] = a[row * n + k] - upd;
                }
            }
        }
        Ok(Lu { n, a, perm })
    }

    pub fn solve(&self, b: &[Complex<S>]) -> Result<Vec<Complex<S>>> {
        Ok(self.lu()?.solve(b))
    }

    pub fn inverse(&self) -> Result<Self> {
        let lu = self.lu()?;
        let n = self.n;
        let mut inv = Self::zeros(n);
        let mut e = vec![Complex::zero(); n];
        for j in 0..n {
            e.iter_mut().for_each(|z| *z = Complex::zero());
            e[j] = Complex::one();
            let col = lu.solve(&e);
            for (i, z) in col.into_iter().enumerate() {
                inv.set(i, j, z);
            }
        }
        Ok(inv)
    }

    /// Plain `f64` copy with infinitesimal parts dropped.
    pub fn value(&self) -> CMat<f64> {
        CMat {
            n: self.n,
            data: self.data.iter().map(complex_value).collect(),
        }
    }
}

impl CMat<f64> {
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermitian_residual(&self) -> f64 {
        self.max_abs_diff(&self.conj_transpose())
    }

    /// Eigenvalues of the Hermitian part, ascending. Uses the real symmetric
    /// 2n×2n embedding `[[A, -B], [B, A]]`, whose spectrum is that of `A + iB`
    /// with every eigenvalue doubled.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let n = self.n;
        let h = CMat::from_fn(n, |i, j| (self.get(i, j) + self.get(j, i).conj()) * 0.5);
        let m = nalgebra::DMatrix::from_fn(2 * n, 2 * n, |r, c| {
            let z = h.get(r % n, c % n);
            match (r < n, c < n) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        });
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev.into_iter().step_by(2).collect()
    }

    pub fn min_hermitian_eigenvalue(&self) -> f64 {
        self.hermitian_eigenvalues()[0]
    }

    pub fn as_rows(&self) -> Vec<Vec<C64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }
}

/// Packed LU factors and row permutation from [`CMat::lu`].
#[derive(Clone, Debug)]
pub struct Lu<S> {
    n: usize,
    a: Vec<Complex<S>>,
    perm: Vec<usize>,
}

impl<S: Scalar> Lu<S> {
    pub fn solve(&self, b: &[Complex<S>]) -> Vec<Complex<S>> {
        let n = self.n;
        let mut x: Vec<Complex<S>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let upd = self.a[i * n + k] * x[k];
                x[i] = x[i] - upd;
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let upd = self.a[i * n + k] * x[k];
                x[i] = x[i] - upd;
            }
            x[i] = x[i] / self.a[i * n + i];
        }
        x
    }
}

/// Dense complex tensor `t[a][b][c]` with all three indices in `0..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3<S = f64> {
    n: usize,
    data: Vec<Complex<S>>,
}

impl<S: Scalar> Tensor3<S> {
    pub fn zeros(n: usize) -> Self {
        Tensor3 {
            n,
            data: vec![Complex::zero(); n * n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> Complex<S>) -> Self {
        let mut data = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    data.push(f(a, b, c));
                }
            }
        }
        Tensor3 { n, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> Complex<S> {
        self.data[(a * self.n + b) * self.n + c]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, z: Complex<S>) {
        let n = self.n;
        self.data[(a * n + b) * n + c] = z;
    }

    pub fn value(&self) -> Tensor3<f64> {
        Tensor3 {
            n: self.n,
            data: self.data.iter().map(complex_value).collect(),
        }
    }
}

impl Tensor3<f64> {
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, s: C64) -> Self {
        Tensor3 {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Nested `t[a][b][c]` arrays, convenient for serialization.
    pub fn as_nested(&self) -> Vec<Vec<Vec<C64>>> {
        (0..self.n)
            .map(|a| {
                (0..self.n)
                    .map(|b| (0..self.n).map(|c| self.get(a, b, c)).collect())
                    .collect()
            })
            .collect()
    }
}

pub fn max_abs(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
