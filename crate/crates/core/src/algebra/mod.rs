//! Real and complexified Lie algebras, almost complex structures and their
//! integrability, and brackets on `g^C` with type projections.

mod builtin;
mod complexified;
pub mod io;
mod real;

use std::ops::Deref;

use serde::Serialize;

pub use builtin::{Builtin, RealBuiltin};
pub use complexified::{ComplexValidationReport, ComplexifiedAlgebra, StructureConstant};
pub use real::{
    complexify, holomorphic_generators, nijenhuis, validate_real, AlmostComplexStructure, NijenhuisReport,
    RealLieAlgebra, ValidationReport,
};

use crate::linalg::C64;

/// Antisymmetry, Jacobi, `I² = -Id` on exact inputs.
pub const STRUCTURAL_TOL: f64 = 1e-12;
/// Integrability and closure of computed bases.
pub const INTEGRABILITY_TOL: f64 = 1e-10;

/// Coordinates `v^i` of `v = v^i e_i ∈ g^{1,0}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct HolVector(#[serde(serialize_with = "crate::json::complex_vec")] pub Vec<C64>);

impl HolVector {
    pub fn zeros(n: usize) -> Self {
        HolVector(vec![C64::new(0.0, 0.0); n])
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = C64::new(1.0, 0.0);
        v
    }

    pub fn scale(&self, s: C64) -> Self {
        HolVector(self.0.iter().map(|z| z * s).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.norm_sqr() == 0.0)
    }

    pub fn into_inner(self) -> Vec<C64> {
        self.0
    }
}

impl Deref for HolVector {
    type Target = [C64];
    fn deref(&self) -> &[C64] {
        &self.0
    }
}

impl From<Vec<C64>> for HolVector {
    fn from(v: Vec<C64>) -> Self {
        HolVector(v)
    }
}

/// An element `hol^i e_i + anti^i ē_i` of `g^C`. `anti` holds the raw
/// coefficients of `ē_i`; the conjugate coordinates of the (0,1)-part are
/// `conj(anti)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixedVector {
    #[serde(serialize_with = "crate::json::complex_vec")]
    pub hol: Vec<C64>,
    #[serde(serialize_with = "crate::json::complex_vec")]
    pub anti: Vec<C64>,
}

impl MixedVector {
    pub fn zeros(n: usize) -> Self {
        MixedVector {
            hol: vec![C64::new(0.0, 0.0); n],
            anti: vec![C64::new(0.0, 0.0); n],
        }
    }

    /// `u ∈ g^{1,0}`.
    pub fn from_hol(u: &[C64]) -> Self {
        MixedVector {
            hol: u.to_vec(),
            anti: vec![C64::new(0.0, 0.0); u.len()],
        }
    }

    /// `ū ∈ g^{0,1}` for `u ∈ g^{1,0}`.
    pub fn from_conj(u: &[C64]) -> Self {
        MixedVector {
            hol: vec![C64::new(0.0, 0.0); u.len()],
            anti: u.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Basis element `p` of `(e_1..e_n, ē_1..ē_n)`.
    pub fn basis(n: usize, p: usize) -> Self {
        let mut m = Self::zeros(n);
        if p < n {
            m.hol[p] = C64::new(1.0, 0.0);
        } else {
            m.anti[p - n] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Complex conjugation on `g^C`: swaps the parts and conjugates.
    pub fn conj(&self) -> Self {
        MixedVector {
            hol: self.anti.iter().map(|z| z.conj()).collect(),
            anti: self.hol.iter().map(|z| z.conj()).collect(),
        }
    }

    /// The (1,0)-part as a vector of `g^{1,0}`.
    pub fn hol_part(&self) -> HolVector {
        HolVector(self.hol.clone())
    }

    /// Conjugate coordinates of the (0,1)-part, i.e. `w` with `(0,1)-part = w̄`.
    pub fn anti_conj_coords(&self) -> HolVector {
        HolVector(self.anti.iter().map(|z| z.conj()).collect())
    }

    pub(crate) fn stacked(&self) -> Vec<C64> {
        self.hol.iter().chain(&self.anti).copied().collect()
    }

    pub(crate) fn from_stacked(n: usize, mut v: Vec<C64>) -> Self {
        let anti = v.split_off(n);
        MixedVector { hol: v, anti }
    }

    pub fn max_abs(&self) -> f64 {
        self.hol.iter().chain(&self.anti).map(|z| z.norm()).fold(0.0, f64::max)
    }
}
