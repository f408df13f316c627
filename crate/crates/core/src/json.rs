//! Complex numbers in JSON as `{"re": .., "im": ..}`. Floats are written by
//! serde_json in shortest round-trip form.

use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::linalg::{CMat, Tensor3, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<C64> for ComplexJson {
    fn from(z: C64) -> Self {
        ComplexJson { re: z.re, im: z.im }
    }
}

impl From<ComplexJson> for C64 {
    fn from(z: ComplexJson) -> Self {
        C64::new(z.re, z.im)
    }
}

pub fn complex<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
    ComplexJson::from(*z).serialize(s)
}

pub fn complex_vec<S: Serializer>(v: &[C64], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&ComplexJson::from(*z))?;
    }
    seq.end()
}

pub fn complex_opt_vec<S: Serializer>(v: &Option<Vec<C64>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => complex_vec(v, s),
        None => s.serialize_none(),
    }
}

pub fn matrix_rows(m: &CMat) -> Vec<Vec<ComplexJson>> {
    m.as_rows()
        .into_iter()
        .map(|r| r.into_iter().map(ComplexJson::from).collect())
        .collect()
}

pub fn matrix<S: Serializer>(m: &CMat, s: S) -> Result<S::Ok, S::Error> {
    matrix_rows(m).serialize(s)
}

pub fn tensor<S: Serializer>(t: &Tensor3, s: S) -> Result<S::Ok, S::Error> {
    t.as_nested()
        .into_iter()
        .map(|a| {
            a.into_iter()
                .map(|b| b.into_iter().map(ComplexJson::from).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .serialize(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Wrap {
        #[serde(serialize_with = "complex_vec")]
        v: Vec<C64>,
    }

    #[test]
    fn complex_round_trip_is_exact() {
        let z = C64::new(0.1 + 0.2, -1.0 / 3.0);
        let text = serde_json::to_string(&ComplexJson::from(z)).unwrap();
        let back: ComplexJson = serde_json::from_str(&text).unwrap();
        assert_eq!(C64::from(back), z);
    }

    #[test]
    fn vectors_serialize_as_objects() {
        let w = Wrap {
            v: vec![C64::new(1.0, -2.0)],
        };
        assert_eq!(serde_json::to_string(&w).unwrap(), r#"{"v":[{"re":1.0,"im":-2.0}]}"#);
    }
}
