//! Compressed sparse row storage.
//!
//! Column indices within a row are strictly increasing, so every traversal
//! (and every floating-point accumulation) happens in the same order for a
//! given matrix.

use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    n_rows: usize,
    n_cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> CsrMatrix<T> {
    /// Builds from `(row, col, value)` triplets. Explicit zeros are dropped;
    /// duplicate coordinates are rejected.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Result<Self> {
        let mut entries: Vec<(usize, usize, T)> = Vec::new();
        for (r, c, v) in triplets {
            if r >= n_rows || c >= n_cols {
                return Err(Error::InvalidGraph(format!(
                    "entry ({r}, {c}) outside {n_rows}x{n_cols} matrix"
                )));
            }
            if v != T::zero() {
                entries.push((r, c, v));
            }
        }
        entries.sort_by_key(|&(r, c, _)| (r, c));
        if let Some(w) = entries
            .windows(2)
            .find(|w| w[0].0 == w[1].0 && w[0].1 == w[1].1)
        {
            return Err(Error::InvalidGraph(format!(
                "duplicate entry at ({}, {})",
                w[0].0, w[0].1
            )));
        }
        let mut row_ptr = vec![0usize; n_rows + 1];
        for &(r, _, _) in &entries {
            row_ptr[r + 1] += 1;
        }
        for i in 0..n_rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(CsrMatrix {
            n_rows,
            n_cols,
            row_ptr,
            col_idx: entries.iter().map(|e| e.1).collect(),
            values: entries.iter().map(|e| e.2).collect(),
        })
    }

    pub fn from_dense(m: &Matrix<T>) -> Self {
        let mut row_ptr = Vec::with_capacity(m.rows() + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for i in 0..m.rows() {
            for (j, &v) in m.row(i).iter().enumerate() {
                if v != T::zero() {
                    col_idx.push(j);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        CsrMatrix {
            n_rows: m.rows(),
            n_cols: m.cols(),
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn identity(n: usize) -> Self {
        CsrMatrix {
            n_rows: n,
            n_cols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![T::one(); n],
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `(column, value)` pairs of row `i` in ascending column order.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn row_nnz(&self, i: usize) -> usize {
        self.row_ptr[i + 1] - self.row_ptr[i]
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[span.clone()].binary_search(&j) {
            Ok(p) => self.values[span.start + p],
            Err(_) => T::zero(),
        }
    }

    /// All stored `(row, col, value)` entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.n_rows).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn row_sums(&self) -> Vec<T> {
        (0..self.n_rows)
            .map(|i| self.row(i).fold(T::zero(), |acc, (_, v)| acc + v))
            .collect()
    }

    /// Applies `f(row, col, value)` to every stored value; structural zeros
    /// produced by `f` are kept.
    pub fn map_values(&self, f: impl Fn(usize, usize, T) -> T) -> Self {
        let mut out = self.clone();
        for i in 0..self.n_rows {
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                out.values[p] = f(i, self.col_idx[p], self.values[p]);
            }
        }
        out
    }

    /// `y = A x` for a dense vector.
    pub fn mul_vec(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.n_cols {
            return Err(Error::DimensionMismatch {
                expected: self.n_cols,
                actual: x.len(),
            });
        }
        Ok((0..self.n_rows)
            .map(|i| self.row(i).fold(T::zero(), |acc, (j, v)| acc + v * x[j]))
            .collect())
    }

    /// `Y = A X` for a dense row-major matrix; each output column is the
    /// product with the matching input column.
    pub fn mul_dense(&self, x: &Matrix<T>) -> Result<Matrix<T>> {
        if x.rows() != self.n_cols {
            return Err(Error::DimensionMismatch {
                expected: self.n_cols,
                actual: x.rows(),
            });
        }
        let d = x.cols();
        let mut out = Matrix::zeros(self.n_rows, d);
        for i in 0..self.n_rows {
            let acc = out.row_mut(i);
            for (j, v) in self.row(i) {
                for (a, xv) in acc.iter_mut().zip(x.row(j)) {
                    *a = *a + v * *xv;
                }
            }
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> Matrix<T> {
        let mut m = Matrix::zeros(self.n_rows, self.n_cols);
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v;
        }
        m
    }

    /// Largest `|A[i,j] - A[j,i]|` over stored entries, with the offending
    /// coordinate.
    pub fn max_asymmetry(&self) -> Option<(usize, usize, T)> {
        if self.n_rows != self.n_cols {
            return None;
        }
        let mut worst: Option<(usize, usize, T)> = None;
        for (i, j, v) in self.triplets() {
            let gap = (v - self.get(j, i)).abs();
            if worst.map_or(gap > T::zero(), |w| gap > w.2) {
                worst = Some((i, j, gap));
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_sorted_and_zeros_dropped() {
        let m = CsrMatrix::from_triplets(2, 3, vec![(1, 2, 3.0), (0, 1, 1.0), (1, 0, 0.0)]).unwrap();
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.get(1, 2), 3.0);
        assert_eq!(m.get(1, 0), 0.0);
    }

    #[test]
    fn duplicates_rejected() {
        assert!(CsrMatrix::from_triplets(2, 2, vec![(0, 1, 1.0), (0, 1, 2.0)]).is_err());
    }

    #[test]
    fn mul_vec_matches_dense() {
        let d = Matrix::from_rows(&[[0.0, 1.0, 2.0], [3.0, 0.0, 0.0]]).unwrap();
        let s = CsrMatrix::from_dense(&d);
        let y = s.mul_vec(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(y, vec![8.0, 3.0]);
        assert!(s.mul_vec(&[1.0]).is_err());
    }

    #[test]
    fn asymmetry_reported() {
        let m = CsrMatrix::from_triplets(2, 2, vec![(0, 1, 1.0)]).unwrap();
        assert_eq!(m.max_asymmetry(), Some((0, 1, 1.0)));
    }
}
