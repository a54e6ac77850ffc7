//! Small dense matrices, just enough for zero-forcing detection and lattice
//! geometry: complex Gram/pseudo-inverse via Gauss-Jordan with partial
//! pivoting, and a real Cholesky for volume computations. Dimensions here are
//! antenna counts (tens), so O(n^3) dense routines are the right tool.

use crate::scalar::Scalar;
use num_complex::Complex;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is numerically singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat<S: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<S>>,
}

impl<S: Scalar> CMat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Complex::new(S::zero(), S::zero()); rows * cols],
        }
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex<S>,
    ) -> Self {
        let mut m = CMat::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.data[r * cols + c] = f(r, c);
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        CMat::from_fn(n, n, |r, c| {
            if r == c {
                Complex::new(S::one(), S::zero())
            } else {
                Complex::new(S::zero(), S::zero())
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex<S> {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex<S>) {
        self.data[r * self.cols + c] = v;
    }

    /// Conjugate transpose.
    pub fn hermitian(&self) -> CMat<S> {
        CMat::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn matmul(&self, other: &CMat<S>) -> CMat<S> {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        CMat::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = Complex::new(S::zero(), S::zero());
            for t in 0..self.cols {
                acc = acc + self.get(r, t) * other.get(t, c);
            }
            acc
        })
    }

    pub fn mul_vec(&self, x: &[Complex<S>]) -> Vec<Complex<S>> {
        assert_eq!(self.cols, x.len(), "mul_vec dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = Complex::new(S::zero(), S::zero());
                for (c, xv) in x.iter().enumerate() {
                    acc = acc + self.get(r, c) * *xv;
                }
                acc
            })
            .collect()
    }

    /// Gram matrix `A^H A`.
    pub fn gram(&self) -> CMat<S> {
        CMat::from_fn(self.cols, self.cols, |r, c| {
            let mut acc = Complex::new(S::zero(), S::zero());
            for t in 0..self.rows {
                acc = acc + self.get(t, r).conj() * self.get(t, c);
            }
            acc
        })
    }

    /// Inverse via Gauss-Jordan elimination with partial pivoting. Flags the
    /// matrix as singular when the smallest-to-largest pivot-magnitude ratio
    /// collapses (a conditioning proxy scaled to the scalar's epsilon).
    pub fn inverse(&self) -> Result<CMat<S>, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::Dimension(format!(
                "inverse of non-square {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = CMat::identity(n);
        let mut max_pivot = S::zero();
        let mut min_pivot = S::infinity();
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_mag = a.get(col, col).norm_sqr();
            for r in col + 1..n {
                let mag = a.get(r, col).norm_sqr();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = r;
                }
            }
            if pivot_mag == S::zero() {
                return Err(LinalgError::Singular);
            }
            if pivot_row != col {
                for c in 0..n {
                    let tmp = a.get(col, c);
                    a.set(col, c, a.get(pivot_row, c));
                    a.set(pivot_row, c, tmp);
                    let tmp = inv.get(col, c);
                    inv.set(col, c, inv.get(pivot_row, c));
                    inv.set(pivot_row, c, tmp);
                }
            }
            let pivot = a.get(col, col);
            let mag = pivot.norm();
            max_pivot = max_pivot.max(mag);
            min_pivot = min_pivot.min(mag);
            let inv_pivot = Complex::new(S::one(), S::zero()) / pivot;
            for c in 0..n {
                a.set(col, c, a.get(col, c) * inv_pivot);
                inv.set(col, c, inv.get(col, c) * inv_pivot);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col);
                if factor.norm_sqr() == S::zero() {
                    continue;
                }
                for c in 0..n {
                    let av = a.get(r, c) - factor * a.get(col, c);
                    a.set(r, c, av);
                    let iv = inv.get(r, c) - factor * inv.get(col, c);
                    inv.set(r, c, iv);
                }
            }
        }
        if min_pivot / max_pivot < S::epsilon() * S::of(1e4) {
            return Err(LinalgError::Singular);
        }
        Ok(inv)
    }

    pub fn frobenius_norm(&self) -> S {
        self.data
            .iter()
            .fold(S::zero(), |acc, v| acc + v.norm_sqr())
            .sqrt()
    }
}

/// Row-major real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RMat<S: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> RMat<S> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        RMat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> S {
        self.data[r * self.cols + c]
    }

    pub fn column_norm(&self, c: usize) -> S {
        let mut acc = S::zero();
        for r in 0..self.rows {
            let v = self.get(r, c);
            acc = acc + v * v;
        }
        acc.sqrt()
    }

    /// `A^T A`.
    pub fn gram(&self) -> RMat<S> {
        RMat::from_fn(self.cols, self.cols, |r, c| {
            let mut acc = S::zero();
            for t in 0..self.rows {
                acc = acc + self.get(t, r) * self.get(t, c);
            }
            acc
        })
    }

    /// Cholesky factor diagonal of a symmetric positive-definite matrix;
    /// `det = prod(diag)^2`.
    pub fn cholesky_diag(&self) -> Result<Vec<S>, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::Dimension(format!(
                "cholesky of non-square {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut l = vec![S::zero(); n * n];
        let mut diag = Vec::with_capacity(n);
        for i in 0..n {
            for j in 0..=i {
                let mut sum = self.get(i, j);
                for t in 0..j {
                    sum = sum - l[i * n + t] * l[j * n + t];
                }
                if i == j {
                    if sum <= S::zero() {
                        return Err(LinalgError::Singular);
                    }
                    let v = sum.sqrt();
                    l[i * n + i] = v;
                    diag.push(v);
                } else {
                    l[i * n + j] = sum / l[j * n + j];
                }
            }
        }
        Ok(diag)
    }
}
