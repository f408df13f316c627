//! JSON formats for complexified and real algebras. Indices in files are
//! 1-based.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::complexified::{ComplexifiedAlgebra, StructureConstant};
use super::real::{AlmostComplexStructure, RealLieAlgebra};
use crate::error::{Error, Result};
use crate::linalg::C64;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryJson {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    pub n: usize,
    #[serde(default)]
    pub lambda_hol: Vec<EntryJson>,
    #[serde(default)]
    pub lambda_mixed_hol: Vec<EntryJson>,
    #[serde(default)]
    pub lambda_mixed_anti: Vec<EntryJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealEntryJson {
    pub k: usize,
    pub i: usize,
    pub j: usize,
    pub val: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealAlgebraJson {
    pub dim: usize,
    #[serde(default)]
    pub c: Vec<RealEntryJson>,
    #[serde(rename = "I", default, skip_serializing_if = "Option::is_none")]
    pub complex_structure: Option<Vec<Vec<f64>>>,
    /// Optional basis weights for complexification.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

fn zero_based(idx: usize, what: &str) -> Result<usize> {
    idx.checked_sub(1)
        .ok_or_else(|| Error::Input(format!("{what}: indices are 1-based, got 0")))
}

fn to_constants(entries: &[EntryJson], block: &str) -> Result<Vec<StructureConstant>> {
    entries
        .iter()
        .map(|e| {
            Ok(StructureConstant {
                i: zero_based(e.i, block)?,
                j: zero_based(e.j, block)?,
                k: zero_based(e.k, block)?,
                value: C64::new(e.re, e.im),
            })
        })
        .collect()
}

fn to_json(entries: Vec<StructureConstant>) -> Vec<EntryJson> {
    entries
        .into_iter()
        .map(|e| EntryJson {
            i: e.i + 1,
            j: e.j + 1,
            k: e.k + 1,
            re: e.value.re,
            im: e.value.im,
        })
        .collect()
}

impl AlgebraJson {
    pub fn into_algebra(self) -> Result<ComplexifiedAlgebra> {
        ComplexifiedAlgebra::from_entries(
            self.n,
            &to_constants(&self.lambda_hol, "lambda_hol")?,
            &to_constants(&self.lambda_mixed_hol, "lambda_mixed_hol")?,
            &to_constants(&self.lambda_mixed_anti, "lambda_mixed_anti")?,
        )
    }

    pub fn from_algebra(alg: &ComplexifiedAlgebra) -> Self {
        AlgebraJson {
            n: alg.dim(),
            lambda_hol: to_json(alg.hol_entries()),
            lambda_mixed_hol: to_json(alg.mixed_hol_entries()),
            lambda_mixed_anti: to_json(alg.mixed_anti_entries()),
        }
    }
}

pub fn parse_algebra(text: &str) -> Result<ComplexifiedAlgebra> {
    serde_json::from_str::<AlgebraJson>(text)?.into_algebra()
}

pub fn algebra_to_json(alg: &ComplexifiedAlgebra) -> String {
    serde_json::to_string_pretty(&AlgebraJson::from_algebra(alg)).expect("algebra serializes")
}

/// Parsed real-algebra file.
#[derive(Clone, Debug)]
pub struct RealAlgebraFile {
    pub algebra: RealLieAlgebra,
    pub complex_structure: Option<AlmostComplexStructure>,
    pub weights: Option<Vec<f64>>,
}

impl RealAlgebraJson {
    /// Entries whose `(k, j, i)` partner is absent get it filled as `-val`;
    /// explicitly listed partners are kept verbatim.
    pub fn into_file(self) -> Result<RealAlgebraFile> {
        let mut map = BTreeMap::new();
        for e in &self.c {
            let key = (zero_based(e.k, "c")?, zero_based(e.i, "c")?, zero_based(e.j, "c")?);
            if map.insert(key, e.val).is_some() {
                return Err(Error::Input(format!("c: duplicate entry ({}, {}, {})", e.k, e.i, e.j)));
            }
        }
        let listed: Vec<_> = map.iter().map(|(&k, &v)| (k, v)).collect();
        for ((k, i, j), v) in listed {
            map.entry((k, j, i)).or_insert(-v);
        }
        let algebra = RealLieAlgebra::new(self.dim, map)?;
        let complex_structure = self
            .complex_structure
            .map(|rows| {
                if rows.len() != self.dim {
                    return Err(Error::Input(format!(
                        "I has {} rows, expected {}",
                        rows.len(),
                        self.dim
                    )));
                }
                AlmostComplexStructure::new(rows)
            })
            .transpose()?;
        Ok(RealAlgebraFile {
            algebra,
            complex_structure,
            weights: self.weights,
        })
    }

    pub fn from_parts(alg: &RealLieAlgebra, acs: Option<&AlmostComplexStructure>) -> Self {
        RealAlgebraJson {
            dim: alg.dim(),
            c: alg
                .entries()
                .map(|((k, i, j), val)| RealEntryJson {
                    k: k + 1,
                    i: i + 1,
                    j: j + 1,
                    val,
                })
                .collect(),
            complex_structure: acs.map(|a| a.rows()),
            weights: None,
        }
    }
}

pub fn parse_real_algebra(text: &str) -> Result<RealAlgebraFile> {
    serde_json::from_str::<RealAlgebraJson>(text)?.into_file()
}
