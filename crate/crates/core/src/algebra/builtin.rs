use serde::Serialize;

use super::complexified::{cx, ComplexifiedAlgebra, StructureConstant};
use super::io::RealAlgebraFile;
use super::real::{AlmostComplexStructure, RealLieAlgebra};
use crate::error::{Error, Result};

/// Hard-coded algebras.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Builtin {
    /// `C^n`, all brackets zero.
    Abelian { n: usize },
    /// `[e_1, e_2] = e_3`, complex-group type.
    ComplexHeisenberg,
    /// The solvable algebra of the complex hyperbolic plane, with the
    /// complex structure parameters `beta, gamma > 0` and the basis
    /// `e_1 = (X - √-1 IX)/√(2γ)`, `e_2 = (Y - √-1 IY)/√2`.
    Ch2 { beta: f64, gamma: f64 },
}

fn sc(i: usize, j: usize, k: usize, re: f64) -> StructureConstant {
    StructureConstant {
        i,
        j,
        k,
        value: cx(re, 0.0),
    }
}

impl Builtin {
    pub fn build(&self) -> Result<ComplexifiedAlgebra> {
        match *self {
            Builtin::Abelian { n } => {
                if n == 0 {
                    return Err(Error::Parameter("abelian algebra needs n ≥ 1".into()));
                }
                Ok(ComplexifiedAlgebra::abelian(n))
            }
            Builtin::ComplexHeisenberg => ComplexifiedAlgebra::from_entries(3, &[sc(2, 0, 1, 1.0)], &[], &[]),
            Builtin::Ch2 { beta, gamma } => {
                check_ch2(beta, gamma)?;
                let a = 1.0 / (2.0 * gamma).sqrt();
                let s = 0.5 * a;
                let b = (beta / 2.0).sqrt();
                // [e1,e2] = s e2, [e1,ē1] = a ē1 - a e1, [e1,ē2] = s ē2,
                // [e2,ē2] = b ē1 - b e1, and [e2,ē1] = -s e2 by conjugation.
                let hol = [sc(1, 0, 1, s)];
                let mixed_hol = [sc(0, 0, 0, -a), sc(1, 1, 0, -s), sc(0, 1, 1, -b)];
                let mixed_anti = [sc(0, 0, 0, a), sc(1, 0, 1, s), sc(0, 1, 1, b)];
                ComplexifiedAlgebra::from_entries(2, &hol, &mixed_hol, &mixed_anti)
            }
        }
    }
}

fn check_ch2(beta: f64, gamma: f64) -> Result<()> {
    if !(beta > 0.0 && beta.is_finite()) || !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::Parameter(format!(
            "ch2 needs beta > 0 and gamma > 0, got beta = {beta}, gamma = {gamma}"
        )));
    }
    Ok(())
}

/// Hard-coded real algebras with their complex structures and the basis
/// weights that reproduce the corresponding [`Builtin`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum RealBuiltin {
    /// `R^{2n}` with the standard complex structure.
    Abelian { n: usize },
    /// `C^3` with `[e_1, e_2] = e_3`, viewed as a real algebra on
    /// `e_1, √-1 e_1, e_2, √-1 e_2, e_3, √-1 e_3`.
    ComplexHeisenberg,
    /// Basis `X, Y, Z, W` with `[X,Y] = Y/2`, `[X,Z] = Z/2`, `[X,W] = W`,
    /// `[Z,Y] = W`, and `IX = √(γ/β) W`, `IY = -Z`.
    Ch2 { beta: f64, gamma: f64 },
    /// The `ch2` brackets with the non-integrable `IX = Y`, `IZ = W`.
    Ch2Twisted,
}

impl RealBuiltin {
    pub fn build(&self) -> Result<RealAlgebraFile> {
        match *self {
            RealBuiltin::Abelian { n } => {
                if n == 0 {
                    return Err(Error::Parameter("abelian algebra needs n ≥ 1".into()));
                }
                Ok(RealAlgebraFile {
                    algebra: RealLieAlgebra::abelian(2 * n)?,
                    complex_structure: Some(AlmostComplexStructure::standard(2 * n)?),
                    weights: None,
                })
            }
            RealBuiltin::ComplexHeisenberg => {
                let algebra = RealLieAlgebra::from_brackets(
                    6,
                    &[
                        (0, 2, &[(4, 1.0)]),
                        (0, 3, &[(5, 1.0)]),
                        (1, 2, &[(5, 1.0)]),
                        (1, 3, &[(4, -1.0)]),
                    ],
                )?;
                Ok(RealAlgebraFile {
                    algebra,
                    complex_structure: Some(AlmostComplexStructure::standard(6)?),
                    weights: Some(vec![0.5; 3]),
                })
            }
            RealBuiltin::Ch2 { beta, gamma } => {
                check_ch2(beta, gamma)?;
                let mut rows = vec![vec![0.0; 4]; 4];
                rows[3][0] = (gamma / beta).sqrt();
                rows[2][1] = -1.0;
                rows[1][2] = 1.0;
                rows[0][3] = -(beta / gamma).sqrt();
                Ok(RealAlgebraFile {
                    algebra: ch2_brackets()?,
                    complex_structure: Some(AlmostComplexStructure::new(rows)?),
                    weights: Some(vec![1.0 / (2.0 * gamma).sqrt(), std::f64::consts::FRAC_1_SQRT_2]),
                })
            }
            RealBuiltin::Ch2Twisted => Ok(RealAlgebraFile {
                algebra: ch2_brackets()?,
                complex_structure: Some(AlmostComplexStructure::standard(4)?),
                weights: None,
            }),
        }
    }
}

fn ch2_brackets() -> Result<RealLieAlgebra> {
    RealLieAlgebra::from_brackets(
        4,
        &[
            (0, 1, &[(1, 0.5)]),
            (0, 2, &[(2, 0.5)]),
            (0, 3, &[(3, 1.0)]),
            (2, 1, &[(3, 1.0)]),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{complexify, nijenhuis};
    use std::f64::consts::SQRT_2;

    fn complexified(b: RealBuiltin) -> Result<ComplexifiedAlgebra> {
        let f = b.build().unwrap();
        complexify(&f.algebra, f.complex_structure.as_ref().unwrap(), f.weights.as_deref())
    }

    #[test]
    fn real_builtins_complexify_to_the_complex_ones() {
        for (real, complex) in [
            (
                RealBuiltin::Ch2 { beta: 1.0, gamma: 1.0 },
                Builtin::Ch2 { beta: 1.0, gamma: 1.0 },
            ),
            (
                RealBuiltin::Ch2 { beta: 2.0, gamma: 0.5 },
                Builtin::Ch2 { beta: 2.0, gamma: 0.5 },
            ),
            (RealBuiltin::ComplexHeisenberg, Builtin::ComplexHeisenberg),
            (RealBuiltin::Abelian { n: 2 }, Builtin::Abelian { n: 2 }),
        ] {
            let got = complexified(real).unwrap();
            let want = complex.build().unwrap();
            let diff = got.full_table().max_abs_diff(want.full_table());
            assert!(diff < 1e-12, "{real:?}: {diff}");
        }
    }

    #[test]
    fn twisted_structure_is_not_integrable() {
        let f = RealBuiltin::Ch2Twisted.build().unwrap();
        let rep = nijenhuis(&f.algebra, f.complex_structure.as_ref().unwrap()).unwrap();
        assert!((rep.max_abs - 0.5).abs() < 1e-14, "{}", rep.max_abs);
        assert!(matches!(
            complexified(RealBuiltin::Ch2Twisted),
            Err(Error::Integrability { .. })
        ));
    }

    #[test]
    fn builtins_validate() {
        for b in [
            Builtin::Abelian { n: 3 },
            Builtin::ComplexHeisenberg,
            Builtin::Ch2 { beta: 1.0, gamma: 1.0 },
            Builtin::Ch2 { beta: 0.5, gamma: 2.0 },
            Builtin::Ch2 { beta: 3.0, gamma: 0.25 },
        ] {
            let rep = b.build().unwrap().validate();
            assert!(rep.pass, "{b:?}: {rep:?}");
        }
    }

    #[test]
    fn ch2_unit_parameters_match_listed_constants() {
        let alg = Builtin::Ch2 { beta: 1.0, gamma: 1.0 }.build().unwrap();
        let h = 1.0 / (2.0 * SQRT_2);
        let r = 1.0 / SQRT_2;
        assert!((alg.lambda(1, 0, 1).re - h).abs() < 1e-15);
        assert!((alg.lambda_mixed_hol(0, 0, 0).re + r).abs() < 1e-15);
        assert!((alg.lambda_mixed_anti(0, 0, 0).re - r).abs() < 1e-15);
        assert!((alg.lambda_mixed_anti(1, 0, 1).re - h).abs() < 1e-15);
        assert!((alg.lambda_mixed_hol(0, 1, 1).re + r).abs() < 1e-15);
        assert!((alg.lambda_mixed_anti(0, 1, 1).re - r).abs() < 1e-15);
        assert!((alg.lambda_mixed_hol(1, 1, 0).re + h).abs() < 1e-15);
    }

    #[test]
    fn nonpositive_parameters_rejected() {
        assert!(matches!(
            Builtin::Ch2 { beta: 0.0, gamma: 1.0 }.build(),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            Builtin::Ch2 { beta: 1.0, gamma: -1.0 }.build(),
            Err(Error::Parameter(_))
        ));
        assert!(Builtin::Abelian { n: 0 }.build().is_err());
    }

    #[test]
    fn heisenberg_has_single_constant() {
        let alg = Builtin::ComplexHeisenberg.build().unwrap();
        let e = alg.hol_entries();
        assert_eq!(e.len(), 1);
        assert_eq!((e[0].i, e[0].j, e[0].k), (2, 0, 1));
        assert_eq!(e[0].value, cx(1.0, 0.0));
        assert!(alg.is_complex_group_type().0);
        assert!(!alg.is_abelian());
    }
}
