//! Compressed sparse row matrices and the normalized graph Laplacian.

use rayon::prelude::*;

use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Scalar;

/// Rows above this count are multiplied in parallel. Each output row is
/// produced by exactly one task, so results do not depend on thread count.
const PARALLEL_ROWS: usize = 2048;

#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix<T> {
    n_rows: usize,
    n_cols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> CsrMatrix<T> {
    /// Validates and wraps raw CSR arrays.
    pub fn new(
        n_rows: usize,
        n_cols: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<T>,
    ) -> Result<Self> {
        if row_offsets.len() != n_rows + 1 || row_offsets.first() != Some(&0) {
            return Err(Error::Format("row offsets must have n_rows + 1 entries starting at 0".into()));
        }
        if row_offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Format("row offsets must be non-decreasing".into()));
        }
        let nnz = *row_offsets.last().unwrap();
        if col_indices.len() != nnz || values.len() != nnz {
            return Err(Error::Format("column/value arrays do not match row offsets".into()));
        }
        if col_indices.iter().any(|&c| c >= n_cols) {
            return Err(Error::Format("column index out of bounds".into()));
        }
        Ok(Self {
            n_rows,
            n_cols,
            row_offsets,
            col_indices,
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n_rows: n,
            n_cols: n,
            row_offsets: (0..=n).collect(),
            col_indices: (0..n).collect(),
            values: vec![T::one(); n],
        }
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            row_offsets: vec![0; n_rows + 1],
            col_indices: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Builds from (row, col, value) triplets; duplicates are summed.
    pub fn from_triplets(n_rows: usize, n_cols: usize, triplets: &[(usize, usize, T)]) -> Result<Self> {
        let mut sorted: Vec<(usize, usize, T)> = triplets.to_vec();
        if sorted.iter().any(|&(r, c, _)| r >= n_rows || c >= n_cols) {
            return Err(Error::Format("triplet index out of bounds".into()));
        }
        sorted.sort_by_key(|a| (a.0, a.1));
        let mut row_offsets = vec![0usize; n_rows + 1];
        let mut col_indices = Vec::with_capacity(sorted.len());
        let mut values: Vec<T> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in sorted {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
                continue;
            }
            row_offsets[r + 1] += 1;
            col_indices.push(c);
            values.push(v);
            last = Some((r, c));
        }
        for i in 0..n_rows {
            row_offsets[i + 1] += row_offsets[i];
        }
        Self::new(n_rows, n_cols, row_offsets, col_indices, values)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_rows, self.n_cols)
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Iterator over `(col, value)` of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let span = self.row_offsets[i]..self.row_offsets[i + 1];
        self.col_indices[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.row(i)
            .find(|&(c, _)| c == j)
            .map_or(T::zero(), |(_, v)| v)
    }

    pub fn to_dense(&self) -> Matrix<T> {
        let mut m = Matrix::zeros(self.n_rows, self.n_cols);
        for i in 0..self.n_rows {
            for (j, v) in self.row(i) {
                m[(i, j)] += v;
            }
        }
        m
    }

    /// Checks |a_ij − a_ji| ≤ tol for every stored entry.
    pub fn is_symmetric(&self, tol: T) -> bool {
        if self.n_rows != self.n_cols {
            return false;
        }
        (0..self.n_rows).all(|i| self.row(i).all(|(j, v)| (v - self.get(j, i)).abs() <= tol))
    }

    /// Sparse × dense product.
    pub fn spmv(&self, x: &Matrix<T>) -> Result<Matrix<T>> {
        let mut out = Matrix::zeros(self.n_rows, x.cols());
        self.spmv_into(x, &mut out)?;
        Ok(out)
    }

    /// Writes `self · x` into `out`, which must already have the right shape.
    pub fn spmv_into(&self, x: &Matrix<T>, out: &mut Matrix<T>) -> Result<()> {
        if self.n_cols != x.rows() {
            return Err(Error::mismatch("spmv", self.shape(), x.shape()));
        }
        if out.shape() != (self.n_rows, x.cols()) {
            return Err(Error::mismatch("spmv output", (self.n_rows, x.cols()), out.shape()));
        }
        let m = x.cols();
        if m == 0 {
            return Ok(());
        }
        let kernel = |(i, out_row): (usize, &mut [T])| {
            out_row.iter_mut().for_each(|v| *v = T::zero());
            for (j, a) in self.row(i) {
                for (o, &b) in out_row.iter_mut().zip(x.row(j)) {
                    *o += a * b;
                }
            }
        };
        if self.n_rows >= PARALLEL_ROWS {
            out.as_mut_slice().par_chunks_mut(m).enumerate().for_each(kernel);
        } else {
            out.as_mut_slice().chunks_mut(m).enumerate().for_each(kernel);
        }
        Ok(())
    }
}

/// `L = I − D^{-1/2} A D^{-1/2}`. Isolated nodes keep `L_ii = 1`.
pub fn normalized_laplacian<T: Scalar>(graph: &Graph) -> CsrMatrix<T> {
    let n = graph.node_count();
    let degrees = graph.degrees();
    let inv_sqrt: Vec<T> = degrees
        .iter()
        .map(|&d| if d == 0 { T::zero() } else { T::one() / T::from_usize_lossy(d).sqrt() })
        .collect();
    let adjacency = graph.adjacency_lists();
    let mut row_offsets = Vec::with_capacity(n + 1);
    let mut col_indices = Vec::with_capacity(n + 2 * graph.edge_count());
    let mut values = Vec::with_capacity(n + 2 * graph.edge_count());
    row_offsets.push(0);
    for (u, nbrs) in adjacency.iter().enumerate() {
        let mut diag_written = false;
        for &v in nbrs {
            if !diag_written && v > u {
                col_indices.push(u);
                values.push(T::one());
                diag_written = true;
            }
            col_indices.push(v);
            values.push(-(inv_sqrt[u] * inv_sqrt[v]));
        }
        if !diag_written {
            col_indices.push(u);
            values.push(T::one());
        }
        row_offsets.push(col_indices.len());
    }
    CsrMatrix {
        n_rows: n,
        n_cols: n,
        row_offsets,
        col_indices,
        values,
    }
}
