//! Minimal dense linear algebra: a row-major matrix and a symmetric LDLᵀ solver.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense vector of 64-bit floats.
pub type DenseVector = Vec<f64>;

/// Row-major dense matrix of 64-bit floats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, 0.0)
    }

    pub fn filled(rows: usize, cols: usize, value: f64) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Wraps a row-major buffer. Fails if `data.len() != rows * cols`.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dims(
                "buffer length must equal rows * cols.",
                format!("len={}, rows={rows}, cols={cols}", data.len()),
            ));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    /// Builds a matrix from nested rows; all rows must have equal length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::dims(
                    "all rows must have the same length.",
                    format!("row {i} has {} entries, expected {cols}", r.len()),
                ));
            }
            data.extend_from_slice(r);
        }
        Ok(DenseMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds an n×1 matrix from a column of values.
    pub fn column(values: &[f64]) -> Self {
        DenseMatrix {
            rows: values.len(),
            cols: 1,
            data: values.to_vec(),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.row_iter().map(<[f64]>::to_vec).collect()
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Matrix–vector product `self · v`.
    pub fn mul_vec(&self, v: &[f64]) -> Result<DenseVector> {
        if v.len() != self.cols {
            return Err(Error::dims(
                "vector length must match matrix columns.",
                format!("cols={}, len={}", self.cols, v.len()),
            ));
        }
        Ok(self.row_iter().map(|r| dot(r, v)).collect())
    }

    /// Adds `value` to every diagonal entry.
    pub fn add_diagonal(&mut self, value: f64) {
        for i in 0..self.rows.min(self.cols) {
            self[(i, i)] += value;
        }
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Inner product over four interleaved partial sums.
///
/// The summation order depends only on the length, so equal inputs always
/// give bit-identical results.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let n = a.len().min(b.len());
    let (a, b) = (&a[..n], &b[..n]);
    let mut acc = [0.0; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for l in 0..4 {
            acc[l] += x[l] * y[l];
        }
    }
    let tail = ra.iter().zip(rb).fold(0.0, |s, (x, y)| s + x * y);
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

#[inline]
pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |acc, (x, y)| {
        let d = x - y;
        acc + d * d
    })
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Root-free Cholesky factorization `A = L D Lᵀ` of a symmetric matrix, without pivoting.
///
/// Only the lower triangle of the input is read. Every pivot must be positive
/// and above a relative threshold of `n · ε · max|A_ii|`; otherwise the matrix
/// is reported as singular or indefinite instead of producing a garbage solve.
#[derive(Debug, Clone)]
pub struct Ldlt {
    // Unit lower-triangular factor, stored row-major; the diagonal holds D.
    factor: DenseMatrix,
}

impl Ldlt {
    pub fn new(a: &DenseMatrix) -> Result<Self> {
        Self::in_place(a.clone())
    }

    /// Factors `a`, reusing its storage.
    pub fn in_place(mut a: DenseMatrix) -> Result<Self> {
        let n = a.rows();
        if n != a.cols() {
            return Err(Error::dims(
                "matrix must be square.",
                format!("rows={n}, cols={}", a.cols()),
            ));
        }
        let scale = (0..n).fold(0.0_f64, |m, i| m.max(a[(i, i)].abs()));
        let threshold = n as f64 * f64::EPSILON * scale;

        // Row i of L·D is kept in `ld` while row i of L is being formed.
        let mut ld = vec![0.0; n];
        for i in 0..n {
            let (done, rest) = a.data.split_at_mut(i * n);
            let row_i = &mut rest[..n];
            for j in 0..i {
                let row_j = &done[j * n..j * n + j];
                let v = row_i[j] - dot(&ld[..j], row_j);
                ld[j] = v;
                row_i[j] = v / done[j * n + j];
            }
            let pivot = row_i[i] - dot(&ld[..i], &row_i[..i]);
            if !pivot.is_finite() || pivot <= threshold {
                return Err(Error::Factorization { row: i, pivot });
            }
            row_i[i] = pivot;
        }
        Ok(Ldlt { factor: a })
    }

    pub fn dim(&self) -> usize {
        self.factor.rows()
    }

    /// Diagonal of D.
    pub fn pivots(&self) -> DenseVector {
        (0..self.dim()).map(|i| self.factor[(i, i)]).collect()
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Result<DenseVector> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::dims(
                "right-hand side length must match the factored system.",
                format!("n={n}, len={}", b.len()),
            ));
        }
        let l = &self.factor;
        // L z = b
        let mut x = b.to_vec();
        for i in 0..n {
            let s = dot(&l.row(i)[..i], &x[..i]);
            x[i] -= s;
        }
        // D w = z
        for (i, xi) in x.iter_mut().enumerate() {
            *xi /= l[(i, i)];
        }
        // Lᵀ x = w, walking rows of L backwards as columns of Lᵀ
        for i in (0..n).rev() {
            let xi = x[i];
            let row = &l.row(i)[..i];
            for (xj, lij) in x[..i].iter_mut().zip(row) {
                *xj -= lij * xi;
            }
        }
        Ok(x)
    }
}
