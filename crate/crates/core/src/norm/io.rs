//! JSON norm files:
//!
//! ```json
//! {"kind": "hermitian", "h": [[{"re": 1, "im": 0}, ...], ...]}
//! {"kind": "perturbed_hermitian", "h": ..., "epsilon": 0.1, "p": 2}
//! ```

use serde::{Deserialize, Serialize};

use super::spec::{NormSpec, HERMITIAN_TOL};
use crate::error::{Error, Result};
use crate::json::{matrix_rows, ComplexJson};
use crate::linalg::{CMat, C64};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NormJson {
    Hermitian {
        h: Vec<Vec<ComplexJson>>,
    },
    PerturbedHermitian {
        h: Vec<Vec<ComplexJson>>,
        epsilon: f64,
        p: u32,
    },
}

/// Square matrix from rows, replaced by its Hermitian part. Rows of the
/// wrong length or an anti-Hermitian part above [`HERMITIAN_TOL`] are errors.
fn hermitian_matrix(rows: &[Vec<ComplexJson>]) -> Result<CMat> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::Input("h must be a nonempty square matrix".into()));
    }
    if let Some((r, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != n) {
        return Err(Error::Input(format!(
            "h row {} has {} entries, expected {n}",
            r + 1,
            row.len()
        )));
    }
    let raw = CMat::from_fn(n, |i, j| C64::from(rows[i][j]));
    let asym = raw.hermitian_residual();
    if asym > HERMITIAN_TOL {
        return Err(Error::Input(format!("h is not Hermitian: asymmetry {asym:.3e}")));
    }
    Ok(CMat::from_fn(n, |i, j| (raw.get(i, j) + raw.get(j, i).conj()) * 0.5))
}

impl NormJson {
    pub fn into_norm(self) -> Result<NormSpec> {
        match self {
            NormJson::Hermitian { h } => NormSpec::hermitian(hermitian_matrix(&h)?),
            NormJson::PerturbedHermitian { h, epsilon, p } => NormSpec::perturbed(hermitian_matrix(&h)?, epsilon, p),
        }
    }

    /// `None` for custom norms, which have no file form.
    pub fn from_norm(norm: &NormSpec) -> Option<Self> {
        match norm {
            NormSpec::Hermitian { h } => Some(NormJson::Hermitian { h: matrix_rows(h) }),
            NormSpec::PerturbedHermitian { h, epsilon, p } => Some(NormJson::PerturbedHermitian {
                h: matrix_rows(h),
                epsilon: *epsilon,
                p: *p,
            }),
            NormSpec::Custom(_) => None,
        }
    }
}

pub fn parse_norm(text: &str) -> Result<NormSpec> {
    serde_json::from_str::<NormJson>(text)?.into_norm()
}

pub fn norm_to_json(norm: &NormSpec) -> Option<String> {
    NormJson::from_norm(norm).map(|j| serde_json::to_string_pretty(&j).expect("norm serializes"))
}
