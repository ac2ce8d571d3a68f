use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::dense::DenseMatrix;
use crate::linalg::eigen::EigenResult;
use crate::scalar::Real;

/// Real symmetric tridiagonal matrix stored by its diagonal and off-diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiagonal<T> {
    diag: Vec<T>,
    off: Vec<T>,
}

impl<T: Real> SymTridiagonal<T> {
    pub fn new(diag: Vec<T>, off: Vec<T>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::InvalidArgument(format!(
                "tridiagonal needs n >= 1 diagonal and n - 1 off-diagonal entries, got {} and {}",
                diag.len(),
                off.len()
            )));
        }
        if let Some(i) = diag.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: i, col: i });
        }
        if let Some(i) = off.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: i + 1, col: i });
        }
        Ok(Self { diag, off })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[T] {
        &self.diag
    }

    pub fn off_diag(&self) -> &[T] {
        &self.off
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        if i == j {
            self.diag[i]
        } else if i == j + 1 {
            self.off[j]
        } else if j == i + 1 {
            self.off[i]
        } else {
            T::zero()
        }
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        let n = self.dim();
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex::new(self.diag[i], T::zero()));
        }
        for (i, &e) in self.off.iter().enumerate() {
            m.set(i + 1, i, Complex::new(e, T::zero()));
            m.set(i, i + 1, Complex::new(e, T::zero()));
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::ShapeMismatch {
                op: "tridiagonal sub",
                left: (self.dim(), self.dim()),
                right: (other.dim(), other.dim()),
            });
        }
        Ok(Self {
            diag: self
                .diag
                .iter()
                .zip(&other.diag)
                .map(|(&a, &b)| a - b)
                .collect(),
            off: self
                .off
                .iter()
                .zip(&other.off)
                .map(|(&a, &b)| a - b)
                .collect(),
        })
    }

    pub fn frobenius_norm_sq(&self) -> T {
        let d: T = self.diag.iter().map(|&v| v * v).sum();
        let e: T = self.off.iter().map(|&v| v * v).sum();
        d + e + e
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (T, T) {
        let n = self.dim();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..n {
            let mut r = T::zero();
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence count of the
    /// LDL^T factorization of `T - xI`).
    pub fn count_below(&self, x: T) -> usize {
        let pivmin = self.pivot_floor();
        sturm_count(&self.diag, &self.off_sq(), x, pivmin)
    }

    fn off_sq(&self) -> Vec<T> {
        self.off.iter().map(|&e| e * e).collect()
    }

    fn pivot_floor(&self) -> T {
        let scale = self
            .diag
            .iter()
            .chain(&self.off)
            .fold(T::min_positive_value(), |m, v| m.max(v.abs()));
        scale * T::epsilon() * T::epsilon()
    }

    /// All eigenvalues by Sturm-sequence bisection, sorted non-increasing.
    ///
    /// Each eigenvalue is bracketed until its interval is narrower than
    /// `tol * max(|lo|, |hi|)` (never below a few ulps); the reported residual
    /// bound is the widest final half-interval.
    pub fn eigenvalues(&self, tol: T) -> EigenResult<T> {
        let n = self.dim();
        let (lo, hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs());
        if scale == T::zero() {
            return EigenResult {
                values: vec![T::zero(); n],
                residual_bound: T::zero(),
            };
        }
        let width_tol = (tol.max(T::epsilon() * T::of(4.0))) * scale;
        let e2 = self.off_sq();
        let pivmin = self.pivot_floor();
        // pad the bracket so that no eigenvalue sits exactly on an endpoint
        let pad = scale * T::epsilon() * T::of(16.0) + pivmin;
        let (lo, hi) = (lo - pad, hi + pad);

        let solve = |k: usize| -> (T, T) {
            // k-th smallest eigenvalue (0-based): count_below(a) <= k < count_below(b)
            let (mut a, mut b) = (lo, hi);
            while b - a > width_tol {
                let mid = (a + b) * T::of(0.5);
                if mid <= a || mid >= b {
                    break;
                }
                if sturm_count(&self.diag, &e2, mid, pivmin) > k {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            ((a + b) * T::of(0.5), (b - a) * T::of(0.5))
        };
        let solved: Vec<(T, T)> = if n >= 64 {
            (0..n).into_par_iter().map(solve).collect()
        } else {
            (0..n).map(solve).collect()
        };
        let residual_bound = solved.iter().fold(T::zero(), |m, &(_, r)| m.max(r));
        let values = solved.into_iter().rev().map(|(v, _)| v).collect();
        EigenResult {
            values,
            residual_bound,
        }
    }
}

fn sturm_count<T: Real>(diag: &[T], off_sq: &[T], x: T, pivmin: T) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q.abs() < pivmin {
        q = -pivmin;
    }
    if q < T::zero() {
        count += 1;
    }
    for i in 1..diag.len() {
        q = diag[i] - x - off_sq[i - 1] / q;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < T::zero() {
            count += 1;
        }
    }
    count
}
