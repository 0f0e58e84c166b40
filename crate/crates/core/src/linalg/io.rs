//! JSON matrix files: `{"n": 2, "entries": [[[re, im], ...], ...]}`, row-major.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ComplexMatrix, LinalgError};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let n = m.n();
        let entries = (0..n)
            .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
            .collect();
        Self { n, entries }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, LinalgError> {
        if self.entries.len() != self.n {
            return Err(LinalgError::NotSquare {
                rows: self.entries.len(),
                cols: self.n,
            });
        }
        let rows: Vec<Vec<Complex64>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .collect();
        ComplexMatrix::from_rows(&rows)
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        MatrixFile::from_matrix(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let file = MatrixFile::deserialize(deserializer)?;
        file.to_matrix().map_err(serde::de::Error::custom)
    }
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix, LinalgError> {
    let file: MatrixFile =
        serde_json::from_str(text).map_err(|e| LinalgError::Parse(e.to_string()))?;
    file.to_matrix()
}

pub fn to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string(&MatrixFile::from_matrix(m)).expect("matrix serialization")
}
