//! Row-major dense matrix with the two products the solvers need.

use rayon::prelude::*;

use crate::error::{Error, Result};

const COL_BLOCK: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        let len = rows * cols;
        let mut data = Vec::new();
        data.try_reserve_exact(len)
            .map_err(|_| Error::OutOfMemory {
                bytes: len.saturating_mul(8),
            })?;
        data.resize(len, 0.0);
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidConfig(format!(
                "matrix data has {} entries, expected {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn diag(d: &[f64]) -> Self {
        let n = d.len();
        let mut data = vec![0.0; n * n];
        for (i, v) in d.iter().enumerate() {
            data[i * n + i] = *v;
        }
        DenseMatrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    /// `out = A x`.
    pub fn mul_vec(&self, x: &[f64], out: &mut [f64]) {
        assert_eq!(x.len(), self.cols);
        assert_eq!(out.len(), self.rows);
        if self.cols == 0 {
            out.fill(0.0);
            return;
        }
        out.par_iter_mut()
            .zip(self.data.par_chunks(self.cols))
            .for_each(|(o, row)| *o = dot(row, x));
    }

    /// `out = Aᵀ y`. Each output block sums rows in order, so the result
    /// does not depend on the thread count.
    pub fn mul_t_vec(&self, y: &[f64], out: &mut [f64]) {
        assert_eq!(y.len(), self.rows);
        assert_eq!(out.len(), self.cols);
        let cols = self.cols;
        out.par_chunks_mut(COL_BLOCK)
            .enumerate()
            .for_each(|(b, chunk)| {
                chunk.fill(0.0);
                let start = b * COL_BLOCK;
                for (i, &yi) in y.iter().enumerate() {
                    let row = &self.data[i * cols + start..i * cols + start + chunk.len()];
                    for (o, a) in chunk.iter_mut().zip(row) {
                        *o += a * yi;
                    }
                }
            });
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
