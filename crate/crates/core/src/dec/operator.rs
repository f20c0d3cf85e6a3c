use sprs::{CsMat, TriMat};

use super::DecError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// Signed incidence, entries in {-1, 0, +1}.
    Incidence,
    Diagonal,
    General,
}

/// A sparse operator between cochain spaces, stored row-compressed.
///
/// Products are evaluated row by row in stored column order, so results do
/// not depend on anything but the matrix and the input.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    kind: OperatorKind,
    mat: CsMat<f64>,
}

impl OperatorMatrix {
    pub fn from_triplets(
        kind: OperatorKind,
        rows: usize,
        cols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Self {
        let mut tri = TriMat::new((rows, cols));
        for &(r, c, v) in triplets {
            tri.add_triplet(r, c, v);
        }
        Self {
            kind,
            mat: tri.to_csr(),
        }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let trip: Vec<_> = values.iter().enumerate().map(|(i, &v)| (i, i, v)).collect();
        Self::from_triplets(OperatorKind::Diagonal, n, n, &trip)
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn rows(&self) -> usize {
        self.mat.rows()
    }

    pub fn cols(&self) -> usize {
        self.mat.cols()
    }

    pub fn nnz(&self) -> usize {
        self.mat.nnz()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols(), "operator input length");
        self.mat
            .outer_iterator()
            .map(|row| row.iter().map(|(c, &v)| v * x[c]).sum())
            .collect()
    }

    /// `selfᵀ x` without materializing the transpose.
    pub fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.rows(), "operator input length");
        let mut out = vec![0.0; self.cols()];
        for (r, row) in self.mat.outer_iterator().enumerate() {
            for (c, &v) in row.iter() {
                out[c] += v * x[r];
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self {
            kind: self.kind,
            mat: self.mat.transpose_view().to_csr(),
        }
    }

    /// `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self, DecError> {
        if self.cols() != other.rows() {
            return Err(DecError::Mismatch(format!(
                "cannot compose {}x{} with {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        let kind = if self.kind == OperatorKind::Diagonal && other.kind == OperatorKind::Diagonal {
            OperatorKind::Diagonal
        } else {
            OperatorKind::General
        };
        Ok(Self {
            kind,
            mat: &self.mat * &other.mat,
        })
    }

    /// `self · other` in exact integer arithmetic; only for integer-valued
    /// matrices. Returns the nonzero entries.
    pub fn compose_integer(&self, other: &Self) -> Result<Vec<(usize, usize, i64)>, DecError> {
        if self.cols() != other.rows() {
            return Err(DecError::Mismatch("incompatible shapes".into()));
        }
        let to_int = |v: f64| -> Result<i64, DecError> {
            if v.fract() != 0.0 {
                return Err(DecError::Mismatch(format!("non-integer entry {v}")));
            }
            Ok(v as i64)
        };
        let mut out = Vec::new();
        let mut acc = vec![0i64; other.cols()];
        let mut touched = Vec::new();
        for (r, row) in self.mat.outer_iterator().enumerate() {
            for (k, &a) in row.iter() {
                let a = to_int(a)?;
                for (c, &b) in other.mat.outer_view(k).expect("row in range").iter() {
                    if acc[c] == 0 {
                        touched.push(c);
                    }
                    acc[c] += a * to_int(b)?;
                }
            }
            touched.sort_unstable();
            touched.dedup();
            for &c in &touched {
                if acc[c] != 0 {
                    out.push((r, c, acc[c]));
                }
                acc[c] = 0;
            }
            touched.clear();
        }
        Ok(out)
    }

    /// Row-major nonzero entries.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.nnz());
        for (r, row) in self.mat.outer_iterator().enumerate() {
            for (c, &v) in row.iter() {
                out.push((r, c, v));
            }
        }
        out
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.mat.get(row, col).copied().unwrap_or(0.0)
    }

    /// Diagonal entries (zero where absent).
    pub fn diag(&self) -> Vec<f64> {
        (0..self.rows().min(self.cols())).map(|i| self.get(i, i)).collect()
    }

    /// Entries of row `r` as `(col, value)`.
    pub fn row(&self, r: usize) -> Vec<(usize, f64)> {
        self.mat
            .outer_view(r)
            .map(|v| v.iter().map(|(c, &x)| (c, x)).collect())
            .unwrap_or_default()
    }

    /// Coordinate-list dump, one `row,col,value` line per entry.
    pub fn to_triplet_csv(&self) -> String {
        let mut out = String::from("row,col,value\n");
        for (r, c, v) in self.triplets() {
            out.push_str(&format!("{r},{c},{v}\n"));
        }
        out
    }
}
