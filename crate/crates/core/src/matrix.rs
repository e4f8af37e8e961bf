//! Row-major dense matrices and the naive product used by the
//! matrix-product reduction.

use crate::error::{Error, Result};
use crate::instrument;
use crate::scalar::{Scalar, Surd};

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> DenseMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::BadEntryCount {
                rows,
                cols,
                expected: rows * cols,
                actual: data.len(),
            });
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &T {
        assert!(row < self.rows && col < self.cols, "index ({row}, {col}) out of bounds");
        &self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    /// Columns `start..end` as a new matrix.
    pub fn columns(&self, start: usize, end: usize) -> Self {
        DenseMatrix::from_fn(self.rows, end - start, |r, c| self.get(r, start + c).clone())
    }

    pub fn try_map<U>(&self, f: impl FnMut(&T) -> Result<U>) -> Result<DenseMatrix<U>> {
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }
}

impl<S: Scalar> DenseMatrix<S> {
    pub fn identity(n: usize) -> Self {
        DenseMatrix::from_fn(n, n, |r, c| if r == c { S::one() } else { S::zero() })
    }
}

impl<S: Scalar> DenseMatrix<Surd<S>> {
    /// Plain scalar entries; fails on a root the backend cannot represent.
    pub fn resolve(&self) -> Result<DenseMatrix<S>> {
        self.try_map(|s| {
            s.to_scalar().ok_or(Error::UnresolvedRadical {
                left: s.radicand(),
                right: 1,
            })
        })
    }
}

fn check_dims<T, U>(a: &DenseMatrix<T>, b: &DenseMatrix<U>) -> Result<()> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch {
            left_rows: a.rows,
            left_cols: a.cols,
            right_rows: b.rows,
            right_cols: b.cols,
        });
    }
    Ok(())
}

/// Triple-loop product, accumulating in input order.
pub fn matmul<S: Scalar>(a: &DenseMatrix<S>, b: &DenseMatrix<S>) -> Result<DenseMatrix<S>> {
    check_dims(a, b)?;
    let mut data = Vec::with_capacity(a.rows * b.cols);
    for i in 0..a.rows {
        for j in 0..b.cols {
            let mut acc = S::zero();
            for k in 0..a.cols {
                acc = acc + a.get(i, k).clone() * b.get(k, j).clone();
            }
            instrument::accumulate(2 * a.cols as u64);
            data.push(acc);
        }
    }
    Ok(DenseMatrix {
        rows: a.rows,
        cols: b.cols,
        data,
    })
}

/// Product of two surd-valued matrices. Every output entry must collect
/// terms over a single radicand.
pub fn matmul_surd<S: Scalar>(
    a: &DenseMatrix<Surd<S>>,
    b: &DenseMatrix<Surd<S>>,
) -> Result<DenseMatrix<Surd<S>>> {
    check_dims(a, b)?;
    let mut data = Vec::with_capacity(a.rows * b.cols);
    for i in 0..a.rows {
        for j in 0..b.cols {
            let mut acc = Surd::zero();
            for k in 0..a.cols {
                acc = acc.add(&a.get(i, k).mul(b.get(k, j)))?;
            }
            instrument::accumulate(2 * a.cols as u64);
            data.push(acc);
        }
    }
    Ok(DenseMatrix {
        rows: a.rows,
        cols: b.cols,
        data,
    })
}
