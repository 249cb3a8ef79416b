//! Compressed sparse row weight matrices with a column index on the side.

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatrixError {
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("duplicate entry ({row}, {col})")]
    Duplicate { row: usize, col: usize },
    #[error("entry ({row}, {col}) has non-positive or non-finite weight")]
    BadWeight { row: usize, col: usize },
}

/// Nonnegative sparse matrix. Only strictly positive weights are stored;
/// anything absent is zero.
///
/// Rows are stored CSR with ascending column indices, so every row scan and
/// every column sum runs in a fixed index order.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseWeightMatrix<S> {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<S>,
    // CSC view: positions into `col_idx`/`values`, grouped by column, rows ascending.
    col_ptr: Vec<usize>,
    col_pos: Vec<usize>,
}

impl<S: Scalar> SparseWeightMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_sorted(rows, cols, Vec::new())
    }

    /// Builds a matrix from `(row, col, weight)` triplets in any order.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        mut triplets: Vec<(usize, usize, S)>,
    ) -> Result<Self, MatrixError> {
        for &(row, col, weight) in &triplets {
            if row >= rows || col >= cols {
                return Err(MatrixError::OutOfBounds {
                    row,
                    col,
                    rows,
                    cols,
                });
            }
            if !(weight.is_finite() && weight > S::zero()) {
                return Err(MatrixError::BadWeight { row, col });
            }
        }
        triplets.sort_by_key(|t| (t.0, t.1));
        if let Some(w) = triplets
            .windows(2)
            .find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1))
        {
            return Err(MatrixError::Duplicate {
                row: w[0].0,
                col: w[0].1,
            });
        }
        Ok(Self::from_sorted(rows, cols, triplets))
    }

    fn from_sorted(rows: usize, cols: usize, triplets: Vec<(usize, usize, S)>) -> Self {
        let mut row_ptr = vec![0; rows + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        for &(row, col, weight) in &triplets {
            row_ptr[row + 1] += 1;
            col_idx.push(col);
            values.push(weight);
        }
        for i in 0..rows {
            row_ptr[i + 1] += row_ptr[i];
        }

        let mut col_ptr = vec![0; cols + 1];
        for &col in &col_idx {
            col_ptr[col + 1] += 1;
        }
        for j in 0..cols {
            col_ptr[j + 1] += col_ptr[j];
        }
        let mut fill = col_ptr.clone();
        let mut col_pos = vec![0; col_idx.len()];
        for (pos, &col) in col_idx.iter().enumerate() {
            col_pos[fill[col]] = pos;
            fill[col] += 1;
        }

        SparseWeightMatrix {
            rows,
            cols,
            row_ptr,
            col_idx,
            values,
            col_ptr,
            col_pos,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Stored entries of row `i` as `(col, weight)`, columns ascending.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, S)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    /// Stored entries of column `j` as `(row, weight)`, rows ascending.
    pub fn column(&self, j: usize) -> impl Iterator<Item = (usize, S)> + '_ {
        self.col_pos[self.col_ptr[j]..self.col_ptr[j + 1]]
            .iter()
            .map(move |&pos| (self.row_of(pos), self.values[pos]))
    }

    fn row_of(&self, pos: usize) -> usize {
        // partition_point gives the first row whose start exceeds pos
        self.row_ptr.partition_point(|&start| start <= pos) - 1
    }

    /// All stored entries `(row, col, weight)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, S)> + '_ {
        (0..self.rows).flat_map(move |i| self.row(i).map(move |(j, w)| (i, j, w)))
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[span.clone()].binary_search(&j) {
            Ok(k) => self.values[span.start + k],
            Err(_) => S::zero(),
        }
    }

    /// Column sums, each accumulated in ascending row order.
    pub fn column_sums(&self) -> Vec<S> {
        (0..self.cols)
            .map(|j| self.column(j).fold(S::zero(), |acc, (_, w)| acc + w))
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<S>> {
        let mut dense = vec![vec![S::zero(); self.cols]; self.rows];
        for (i, j, w) in self.entries() {
            dense[i][j] = w;
        }
        dense
    }
}

/// Divides every column by its sum so that each nonzero column sums to one.
/// Columns without stored entries stay empty.
pub fn column_normalize<S: Scalar>(matrix: &SparseWeightMatrix<S>) -> SparseWeightMatrix<S> {
    let sums = matrix.column_sums();
    let mut normalized = matrix.clone();
    for (pos, value) in normalized.values.iter_mut().enumerate() {
        let sum = sums[matrix.col_idx[pos]];
        debug_assert!(sum > S::zero(), "stored column with non-positive sum");
        *value = *value / sum;
    }
    normalized
}
