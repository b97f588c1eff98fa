//! JSON matrix files: row-major complex entries stored as [re, im]
//! pairs, with an optional label carried into reports.

use num_complex::Complex64;
use posinorm::matop::OperatorMatrix;
use posinorm::{CMatrix, Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    /// Row-major [re, im] pairs, rows*cols of them.
    pub entries: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl MatrixFile {
    pub fn from_matrix(m: &CMatrix, label: Option<String>) -> Self {
        let mut entries = Vec::with_capacity(m.nrows() * m.ncols());
        for i in 0..m.nrows() {
            for k in 0..m.ncols() {
                entries.push([m[(i, k)].re, m[(i, k)].im]);
            }
        }
        MatrixFile {
            rows: m.nrows(),
            cols: m.ncols(),
            entries,
            label,
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::Input(format!(
                "matrix file declares an empty {}x{} matrix",
                self.rows, self.cols
            )));
        }
        if self.entries.len() != self.rows * self.cols {
            return Err(Error::Input(format!(
                "matrix file declares {}x{} = {} entries but contains {}",
                self.rows,
                self.cols,
                self.rows * self.cols,
                self.entries.len()
            )));
        }
        if let Some(pos) = self
            .entries
            .iter()
            .position(|[re, im]| !(re.is_finite() && im.is_finite()))
        {
            return Err(Error::Input(format!(
                "matrix file entry {pos} is not finite"
            )));
        }
        let mut m = CMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let [re, im] = self.entries[i * self.cols + k];
                m[(i, k)] = Complex64::new(re, im);
            }
        }
        Ok(m)
    }

    /// Square matrices become labeled operators; the fallback label is
    /// the file's own description of its shape.
    pub fn to_operator(&self) -> Result<OperatorMatrix> {
        let m = self.to_matrix()?;
        if m.nrows() != m.ncols() {
            return Err(Error::Input(format!(
                "operator analysis needs a square matrix, file is {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let label = self
            .label
            .clone()
            .unwrap_or_else(|| format!("{}x{} matrix from file", self.rows, self.cols));
        OperatorMatrix::new(m, label)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Input(format!("cannot parse {}: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Internal(format!("matrix serialization failed: {e}")))?;
        std::fs::write(path, text)
            .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_wrong_entry_count() {
        let f = MatrixFile {
            rows: 2,
            cols: 2,
            entries: vec![[1.0, 0.0]; 3],
            label: None,
        };
        assert!(f.to_matrix().is_err());
    }

    #[test]
    fn rejects_non_finite_entries() {
        let f = MatrixFile {
            rows: 1,
            cols: 2,
            entries: vec![[1.0, 0.0], [f64::NAN, 0.0]],
            label: None,
        };
        assert!(f.to_matrix().is_err());
    }

    #[test]
    fn row_major_order_is_respected() {
        let f = MatrixFile {
            rows: 2,
            cols: 2,
            entries: vec![[1.0, 0.0], [2.0, 0.0], [3.0, 0.0], [4.0, 0.0]],
            label: None,
        };
        let m = f.to_matrix().unwrap();
        assert_eq!(m[(0, 1)], Complex64::new(2.0, 0.0));
        assert_eq!(m[(1, 0)], Complex64::new(3.0, 0.0));
    }

    #[test]
    fn json_round_trip_is_entry_identical() {
        let f = MatrixFile {
            rows: 1,
            cols: 3,
            entries: vec![[0.1, -0.3], [1.0 / 3.0, 2.0f64.sqrt()], [1e-300, -1e300]],
            label: Some("probe".into()),
        };
        let text = serde_json::to_string(&f).unwrap();
        let back: MatrixFile = serde_json::from_str(&text).unwrap();
        assert_eq!(f, back);
        let m1 = f.to_matrix().unwrap();
        let m2 = back.to_matrix().unwrap();
        assert_eq!(m1, m2);
    }
}
