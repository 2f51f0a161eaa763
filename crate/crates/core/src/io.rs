//! JSON wire formats.
//!
//! Matrices are `{"d": int, "entries": [[[re, im], ...], ...]}` in row-major
//! order. serde_json prints doubles in shortest round-trip form, so a
//! write/read cycle is exact.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::{BipartiteMatrix, ComplexMatrix, C64};

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    d: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        MatrixJson {
            d: m.dim(),
            entries: m.rows().into_iter().map(|r| r.into_iter().map(|z| [z.re, z.im]).collect()).collect(),
        }
    }
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = String;

    fn try_from(j: MatrixJson) -> Result<Self, String> {
        if j.entries.len() != j.d || j.entries.iter().any(|r| r.len() != j.d) {
            return Err(format!("matrix entries are not {0}x{0}", j.d));
        }
        let rows = j.entries.into_iter().map(|r| r.into_iter().map(|[re, im]| C64::new(re, im)).collect()).collect();
        ComplexMatrix::from_rows(rows).map_err(|e| e.to_string())
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        ComplexMatrix::try_from(j).map_err(D::Error::custom)
    }
}

/// Bipartite matrices travel as plain matrices of size `d^2`.
impl Serialize for BipartiteMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.matrix().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BipartiteMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let m = ComplexMatrix::deserialize(d)?;
        BipartiteMatrix::from_matrix(m).map_err(D::Error::custom)
    }
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string(m).expect("matrix serialization cannot fail")
}

pub fn matrix_from_json(s: &str) -> crate::Result<ComplexMatrix> {
    Ok(serde_json::from_str(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let m = ComplexMatrix::from_fn(3, |i, j| C64::new(0.1 * i as f64 + 1.0 / 3.0, -(j as f64).sqrt() * 1e-17));
        let back = matrix_from_json(&matrix_to_json(&m)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.get(i, j).re.to_bits(), back.get(i, j).re.to_bits());
                assert_eq!(m.get(i, j).im.to_bits(), back.get(i, j).im.to_bits());
            }
        }
    }

    #[test]
    fn wire_shape() {
        let m = ComplexMatrix::identity(2);
        assert_eq!(matrix_to_json(&m), r#"{"d":2,"entries":[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]}"#);
    }

    #[test]
    fn ragged_rows_are_rejected() {
        assert!(matrix_from_json(r#"{"d":2,"entries":[[[1,0]],[[0,0],[1,0]]]}"#).is_err());
        assert!(matrix_from_json(r#"{"d":3,"entries":[[[1,0],[0,0]],[[0,0],[1,0]]]}"#).is_err());
    }

    #[test]
    fn bipartite_requires_square_size() {
        let s = matrix_to_json(&ComplexMatrix::identity(3));
        assert!(serde_json::from_str::<BipartiteMatrix>(&s).is_err());
        let s = matrix_to_json(&ComplexMatrix::identity(4));
        assert_eq!(serde_json::from_str::<BipartiteMatrix>(&s).unwrap().local_dim(), 2);
    }
}
