//! Compressed-row complex sparse matrices.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Rows shorter than this are applied serially; rayon only pays off on
/// large grids.
const PARALLEL_ROWS: usize = 1 << 15;

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<u32>,
    values: Vec<Complex64>,
}

impl CsrMatrix {
    /// Builds a matrix row by row. `fill` receives the row number and a
    /// scratch buffer to push `(column, value)` pairs into; duplicates are
    /// summed and exact zeros dropped.
    pub fn from_row_fn(nrows: usize, ncols: usize, mut fill: impl FnMut(usize, &mut Vec<(usize, Complex64)>)) -> Self {
        assert!(ncols <= u32::MAX as usize, "column count exceeds u32 index range");
        let mut indptr = Vec::with_capacity(nrows + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        let mut buf = Vec::new();
        indptr.push(0);
        for row in 0..nrows {
            buf.clear();
            fill(row, &mut buf);
            buf.sort_unstable_by_key(|e| e.0);
            let mut k = 0;
            while k < buf.len() {
                let col = buf[k].0;
                debug_assert!(col < ncols);
                let mut v = buf[k].1;
                k += 1;
                while k < buf.len() && buf[k].0 == col {
                    v += buf[k].1;
                    k += 1;
                }
                if v != ZERO {
                    indices.push(col as u32);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        CsrMatrix {
            nrows,
            ncols,
            indptr,
            indices,
            values,
        }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        CsrMatrix {
            nrows,
            ncols,
            indptr: vec![0; nrows + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        CsrMatrix::from_row_fn(n, n, |i, row| row.push((i, diag[i])))
    }

    pub fn real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        CsrMatrix::from_row_fn(n, n, |i, row| row.push((i, Complex64::new(diag[i], 0.0))))
    }

    pub fn identity(n: usize) -> Self {
        CsrMatrix::from_row_fn(n, n, |i, row| row.push((i, Complex64::new(1.0, 0.0))))
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> (&[u32], &[Complex64]) {
        let (s, e) = (self.indptr[i], self.indptr[i + 1]);
        (&self.indices[s..e], &self.values[s..e])
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&(j as u32)) {
            Ok(k) => vals[k],
            Err(_) => ZERO,
        }
    }

    fn row_dot(&self, i: usize, x: &[Complex64]) -> Complex64 {
        let (cols, vals) = self.row(i);
        cols.iter().zip(vals).fold(ZERO, |acc, (&c, v)| acc + v * x[c as usize])
    }

    pub fn matvec_into(&self, x: &[Complex64], y: &mut [Complex64]) -> Result<()> {
        if x.len() != self.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                got: x.len(),
            });
        }
        if y.len() != self.nrows {
            return Err(Error::DimensionMismatch {
                expected: self.nrows,
                got: y.len(),
            });
        }
        if self.nrows >= PARALLEL_ROWS {
            y.par_iter_mut()
                .enumerate()
                .for_each(|(i, yi)| *yi = self.row_dot(i, x));
        } else {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = self.row_dot(i, x);
            }
        }
        Ok(())
    }

    pub fn matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut y = vec![ZERO; self.nrows];
        self.matvec_into(x, &mut y)?;
        Ok(y)
    }

    fn check_same_shape(&self, other: &CsrMatrix) -> Result<()> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.nrows,
                got: other.nrows,
            });
        }
        Ok(())
    }

    /// `alpha·self + beta·other`.
    pub fn linear_combination(&self, alpha: Complex64, other: &CsrMatrix, beta: Complex64) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(CsrMatrix::from_row_fn(self.nrows, self.ncols, |i, row| {
            let (c1, v1) = self.row(i);
            row.extend(c1.iter().zip(v1).map(|(&c, &v)| (c as usize, alpha * v)));
            let (c2, v2) = other.row(i);
            row.extend(c2.iter().zip(v2).map(|(&c, &v)| (c as usize, beta * v)));
        }))
    }

    pub fn add(&self, other: &CsrMatrix) -> Result<Self> {
        self.linear_combination(Complex64::new(1.0, 0.0), other, Complex64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &CsrMatrix) -> Result<Self> {
        self.linear_combination(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        out.drop_zeros()
    }

    /// `diag(d) · self`.
    pub fn scale_rows(&self, d: &[Complex64]) -> Result<Self> {
        if d.len() != self.nrows {
            return Err(Error::DimensionMismatch {
                expected: self.nrows,
                got: d.len(),
            });
        }
        let mut out = self.clone();
        for i in 0..self.nrows {
            for k in self.indptr[i]..self.indptr[i + 1] {
                out.values[k] *= d[i];
            }
        }
        Ok(out.drop_zeros())
    }

    /// `self · diag(d)`.
    pub fn scale_cols(&self, d: &[Complex64]) -> Result<Self> {
        if d.len() != self.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                got: d.len(),
            });
        }
        let mut out = self.clone();
        for (v, &c) in out.values.iter_mut().zip(&self.indices) {
            *v *= d[c as usize];
        }
        Ok(out.drop_zeros())
    }

    fn drop_zeros(self) -> Self {
        if self.values.iter().all(|v| *v != ZERO) {
            return self;
        }
        CsrMatrix::from_row_fn(self.nrows, self.ncols, |i, row| {
            let (c, v) = self.row(i);
            row.extend(c.iter().zip(v).map(|(&c, &v)| (c as usize, v)));
        })
    }

    /// Sparse product `self · other` (row-wise Gustavson accumulation).
    pub fn matmul(&self, other: &CsrMatrix) -> Result<Self> {
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                got: other.nrows,
            });
        }
        let n = other.ncols;
        let mut acc = vec![ZERO; n];
        let mut marker = vec![usize::MAX; n];
        let mut touched: Vec<usize> = Vec::new();
        Ok(CsrMatrix::from_row_fn(self.nrows, n, |i, row| {
            touched.clear();
            let (ca, va) = self.row(i);
            for (&k, &a) in ca.iter().zip(va) {
                let (cb, vb) = other.row(k as usize);
                for (&j, &b) in cb.iter().zip(vb) {
                    let j = j as usize;
                    if marker[j] != i {
                        marker[j] = i;
                        acc[j] = ZERO;
                        touched.push(j);
                    }
                    acc[j] += a * b;
                }
            }
            row.extend(touched.iter().map(|&j| (j, acc[j])));
        }))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut counts = vec![0usize; self.ncols + 1];
        for &c in &self.indices {
            counts[c as usize + 1] += 1;
        }
        for j in 0..self.ncols {
            counts[j + 1] += counts[j];
        }
        let indptr = counts.clone();
        let mut next = counts;
        let mut indices = vec![0u32; self.nnz()];
        let mut values = vec![ZERO; self.nnz()];
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&c, v) in cols.iter().zip(vals) {
                let slot = next[c as usize];
                indices[slot] = i as u32;
                values[slot] = v.conj();
                next[c as usize] += 1;
            }
        }
        CsrMatrix {
            nrows: self.ncols,
            ncols: self.nrows,
            indptr,
            indices,
            values,
        }
    }

    pub fn diagonal_values(&self) -> Vec<Complex64> {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).collect()
    }

    /// Largest entrywise `|a_ij − b_ij|` over the union of both patterns.
    pub fn max_abs_diff(&self, other: &CsrMatrix) -> Result<f64> {
        Ok(self.sub(other)?.values.iter().fold(0.0, |m: f64, v| m.max(v.norm())))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m: f64, v| m.max(v.norm()))
    }

    /// Gershgorin lower bound on the spectrum, valid for Hermitian matrices.
    pub fn gershgorin_lower_bound(&self) -> f64 {
        (0..self.nrows)
            .map(|i| {
                let (cols, vals) = self.row(i);
                let mut diag = 0.0;
                let mut off = 0.0;
                for (&c, v) in cols.iter().zip(vals) {
                    if c as usize == i {
                        diag = v.re;
                    } else {
                        off += v.norm();
                    }
                }
                diag - off
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn gershgorin_upper_bound(&self) -> f64 {
        (0..self.nrows)
            .map(|i| {
                let (cols, vals) = self.row(i);
                cols.iter()
                    .zip(vals)
                    .map(|(&c, v)| if c as usize == i { v.re } else { v.norm() })
                    .sum::<f64>()
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.nrows * self.ncols];
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&c, v) in cols.iter().zip(vals) {
                out[i * self.ncols + c as usize] = *v;
            }
        }
        out
    }
}
