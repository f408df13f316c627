//! Resolution of algebra and norm arguments: file paths or `builtin:` pseudo-paths.

use std::collections::BTreeMap;
use std::fs;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::algebra::io::{parse_algebra, parse_real_algebra, RealAlgebraFile};
use crate::algebra::{complexify, Builtin, ComplexifiedAlgebra, RealBuiltin};
use crate::error::{Error, Result};
use crate::linalg::{CMat, C64};
use crate::norm::io::parse_norm;
use crate::norm::NormSpec;

const PREFIX: &str = "builtin:";

/// Where an input came from, with a content hash.
#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub role: &'static str,
    pub source: String,
    pub sha256: String,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// A parsed `builtin:name?key=value&...` argument.
struct Pseudo {
    name: String,
    params: BTreeMap<String, String>,
}

impl Pseudo {
    fn parse(arg: &str) -> Option<Result<Self>> {
        let rest = arg.strip_prefix(PREFIX)?;
        let (name, query) = rest.split_once('?').unwrap_or((rest, ""));
        let mut params = BTreeMap::new();
        for pair in query.split('&').filter(|p| !p.is_empty()) {
            let Some((k, v)) = pair.split_once('=') else {
                return Some(Err(Error::Input(format!("{arg}: expected key=value, got '{pair}'"))));
            };
            if params.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Some(Err(Error::Input(format!("{arg}: repeated parameter '{k}'"))));
            }
        }
        Some(Ok(Pseudo {
            name: name.trim().to_string(),
            params,
        }))
    }

    fn take_f64(&mut self, key: &str, default: Option<f64>) -> Result<f64> {
        match self.params.remove(key) {
            Some(v) => v
                .parse()
                .map_err(|_| Error::Parameter(format!("{}: '{key}' is not a number: '{v}'", self.name))),
            None => default.ok_or_else(|| Error::Parameter(format!("{}: missing parameter '{key}'", self.name))),
        }
    }

    fn take_usize(&mut self, key: &str, default: Option<usize>) -> Result<usize> {
        match self.params.remove(key) {
            Some(v) => v
                .parse()
                .map_err(|_| Error::Parameter(format!("{}: '{key}' is not a count: '{v}'", self.name))),
            None => default.ok_or_else(|| Error::Parameter(format!("{}: missing parameter '{key}'", self.name))),
        }
    }

    fn take_list(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        self.params
            .remove(key)
            .map(|v| parse_reals(&v).map_err(|e| Error::Parameter(format!("{}: {key}: {e}", self.name))))
            .transpose()
    }

    fn finish(self) -> Result<()> {
        match self.params.keys().next() {
            Some(k) => Err(Error::Input(format!("{}: unknown parameter '{k}'", self.name))),
            None => Ok(()),
        }
    }
}

fn read(path: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{path}: {e}")))
}

fn is_real_file(text: &str) -> bool {
    serde_json::from_str::<serde_json::Value>(text)
        .ok()
        .and_then(|v| v.as_object().map(|o| o.contains_key("dim")))
        .unwrap_or(false)
}

/// An algebra argument before complexification.
pub enum AlgebraInput {
    Complex(ComplexifiedAlgebra),
    Real(RealAlgebraFile),
}

const REAL_BUILTINS: [&str; 4] = ["ch2_real", "abelian_real", "complex_heisenberg_real", "ch2_twisted"];

fn builtin_complex(mut p: Pseudo) -> Result<ComplexifiedAlgebra> {
    let b = match p.name.as_str() {
        "ch2" => Builtin::Ch2 {
            beta: p.take_f64("beta", Some(1.0))?,
            gamma: p.take_f64("gamma", Some(1.0))?,
        },
        "abelian" => Builtin::Abelian {
            n: p.take_usize("n", None)?,
        },
        "complex_heisenberg" => Builtin::ComplexHeisenberg,
        other => return Err(Error::Input(format!("unknown builtin algebra '{other}'"))),
    };
    p.finish()?;
    b.build()
}

fn builtin_real(mut p: Pseudo) -> Result<RealAlgebraFile> {
    let b = match p.name.as_str() {
        "ch2_real" => RealBuiltin::Ch2 {
            beta: p.take_f64("beta", Some(1.0))?,
            gamma: p.take_f64("gamma", Some(1.0))?,
        },
        "abelian_real" => RealBuiltin::Abelian {
            n: p.take_usize("n", None)?,
        },
        "complex_heisenberg_real" => RealBuiltin::ComplexHeisenberg,
        "ch2_twisted" => RealBuiltin::Ch2Twisted,
        other => return Err(Error::Input(format!("unknown builtin algebra '{other}'"))),
    };
    p.finish()?;
    b.build()
}

/// Reads a real or complexified algebra; real files are recognized by their
/// `dim` field.
pub fn load_algebra(arg: &str) -> Result<(AlgebraInput, InputDigest)> {
    let (input, bytes) = match Pseudo::parse(arg) {
        Some(p) => {
            let p = p?;
            let input = if REAL_BUILTINS.contains(&p.name.as_str()) {
                AlgebraInput::Real(builtin_real(p)?)
            } else {
                AlgebraInput::Complex(builtin_complex(p)?)
            };
            (input, arg.as_bytes().to_vec())
        }
        None => {
            let text = read(arg)?;
            let input = if is_real_file(&text) {
                AlgebraInput::Real(parse_real_algebra(&text)?)
            } else {
                AlgebraInput::Complex(parse_algebra(&text)?)
            };
            (input, text.into_bytes())
        }
    };
    let d = InputDigest {
        role: "algebra",
        source: arg.to_string(),
        sha256: digest(&bytes),
    };
    Ok((input, d))
}

/// Complexifies real inputs; requires the complex structure.
pub fn complex_algebra(input: AlgebraInput) -> Result<ComplexifiedAlgebra> {
    match input {
        AlgebraInput::Complex(alg) => Ok(alg),
        AlgebraInput::Real(f) => {
            let acs = f
                .complex_structure
                .as_ref()
                .ok_or_else(|| Error::Input("real algebra has no complex structure \"I\"".into()))?;
            complexify(&f.algebra, acs, f.weights.as_deref())
        }
    }
}

fn diag_matrix(d: &[f64]) -> CMat {
    CMat::from_fn(d.len(), |i, j| C64::new(if i == j { d[i] } else { 0.0 }, 0.0))
}

/// Reads a norm for an algebra of complex dimension `n`.
pub fn load_norm(arg: &str, n: usize) -> Result<(NormSpec, InputDigest)> {
    let (norm, bytes) = match Pseudo::parse(arg) {
        Some(p) => {
            let mut p = p?;
            let diag = p.take_list("diag")?;
            let h = match &diag {
                Some(d) => diag_matrix(d),
                None => CMat::identity(n),
            };
            let norm = match p.name.as_str() {
                "identity" if diag.is_some() => {
                    return Err(Error::Input(
                        "identity norm takes no parameters; use builtin:hermitian?diag=..".into(),
                    ))
                }
                "identity" => NormSpec::identity(n),
                "hermitian" => NormSpec::hermitian(h)?,
                "perturbed" => {
                    let eps = p.take_f64("epsilon", Some(0.1))?;
                    let pw = p.take_usize("p", Some(2))?;
                    let pw = u32::try_from(pw).map_err(|_| Error::Parameter(format!("p too large: {pw}")))?;
                    NormSpec::perturbed(h, eps, pw)?
                }
                other => return Err(Error::Input(format!("unknown builtin norm '{other}'"))),
            };
            p.finish()?;
            (norm, arg.as_bytes().to_vec())
        }
        None => {
            let text = read(arg)?;
            (parse_norm(&text)?, text.into_bytes())
        }
    };
    if norm.dim() != n {
        return Err(Error::Input(format!(
            "norm has dimension {}, algebra has complex dimension {n}",
            norm.dim()
        )));
    }
    let d = InputDigest {
        role: "norm",
        source: arg.to_string(),
        sha256: digest(&bytes),
    };
    Ok((norm, d))
}

/// Digest of a template argument: the text itself for builtins and
/// templates with placeholders, the file contents otherwise.
pub fn digest_arg(role: &'static str, arg: &str) -> Result<InputDigest> {
    let bytes = if arg.starts_with(PREFIX) || arg.contains('{') {
        arg.as_bytes().to_vec()
    } else {
        read(arg)?.into_bytes()
    };
    Ok(InputDigest {
        role,
        source: arg.to_string(),
        sha256: digest(&bytes),
    })
}

/// Comma-separated reals.
pub fn parse_reals(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("not a number: '{}'", t.trim()))
        })
        .collect()
}

/// Comma-separated `re:im` pairs; a bare number is real.
pub fn parse_vector(s: &str) -> Result<Vec<C64>> {
    let bad = |t: &str| Error::Input(format!("vector component '{t}' is not a number or re:im pair"));
    s.split(',')
        .map(|t| {
            let t = t.trim();
            let (re, im) = t.split_once(':').unwrap_or((t, "0"));
            Ok(C64::new(
                re.trim().parse().map_err(|_| bad(t))?,
                im.trim().parse().map_err(|_| bad(t))?,
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vectors() {
        assert_eq!(
            parse_vector("1,0").unwrap(),
            vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
        );
        assert_eq!(
            parse_vector("1:-2, 0.5:0").unwrap(),
            vec![C64::new(1.0, -2.0), C64::new(0.5, 0.0)]
        );
        assert!(parse_vector("1:x").is_err());
    }

    #[test]
    fn builtins_resolve() {
        let (a, d) = load_algebra("builtin:ch2?beta=2&gamma=0.5").unwrap();
        assert!(matches!(a, AlgebraInput::Complex(ref alg) if alg.dim() == 2));
        assert_eq!(d.sha256.len(), 64);
        assert!(matches!(
            load_algebra("builtin:ch2_real").unwrap().0,
            AlgebraInput::Real(_)
        ));
        assert!(matches!(load_algebra("builtin:ch2?delta=1"), Err(Error::Input(_))));
        assert!(matches!(load_algebra("builtin:ch2?gamma=-1"), Err(Error::Parameter(_))));
        assert!(matches!(load_algebra("builtin:so3"), Err(Error::Input(_))));
        let (norm, _) = load_norm("builtin:perturbed?epsilon=0.2&p=3&diag=2,1", 2).unwrap();
        assert!(matches!(norm, NormSpec::PerturbedHermitian { p: 3, .. }));
        assert!(load_norm("builtin:identity", 3).unwrap().0.is_hermitian());
        assert!(matches!(
            load_norm("builtin:hermitian?diag=1,1,1", 2),
            Err(Error::Input(_))
        ));
    }
}
