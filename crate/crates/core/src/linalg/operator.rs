use num_complex::Complex;
use num_traits::Zero;

use crate::error::Result;
use crate::linalg::dense::DenseMatrix;
use crate::linalg::eigen::{
    hermitian_eigenvalues, singular_values, sort_non_increasing, EigenResult,
};
use crate::linalg::tridiagonal::SymTridiagonal;
use crate::scalar::{Cx, Real};

/// Square matrix accessible by entries, with spectral routines.
///
/// Structured matrices (tridiagonal, locally Toeplitz) implement this so the
/// extraction and distribution code runs at sizes where a dense copy would not
/// fit in memory.
pub trait MatrixOperator<T: Real>: Sync {
    fn dim(&self) -> usize;

    fn entry(&self, i: usize, j: usize) -> Cx<T>;

    /// `sum_s A[start + s + k, start + s]` over the indices that stay inside the
    /// diagonal block `start..start + len`.
    fn block_diagonal_sum(&self, start: usize, len: usize, k: isize) -> Cx<T> {
        let (from, to) = diagonal_range(len, k);
        (from..to)
            .map(|s| self.entry(start + (s as isize + k) as usize, start + s))
            .sum()
    }

    fn frobenius_norm_sq(&self) -> T;

    fn to_dense(&self) -> DenseMatrix<T>;

    /// Real symmetric tridiagonal form, when the operator has one.
    fn as_sym_tridiagonal(&self) -> Option<SymTridiagonal<T>> {
        None
    }

    fn hermitian_eigenvalues(&self, tol: T) -> Result<EigenResult<T>> {
        match self.as_sym_tridiagonal() {
            Some(t) => Ok(t.eigenvalues(tol)),
            None => hermitian_eigenvalues(&self.to_dense(), tol),
        }
    }

    fn singular_values(&self, tol: T) -> Result<EigenResult<T>> {
        match self.as_sym_tridiagonal() {
            Some(t) => {
                let eig = t.eigenvalues(tol);
                let mut values: Vec<T> = eig.values.iter().map(|v| v.abs()).collect();
                sort_non_increasing(&mut values);
                Ok(EigenResult {
                    values,
                    residual_bound: eig.residual_bound,
                })
            }
            None => singular_values(&self.to_dense(), tol),
        }
    }
}

/// Range of `s` with `0 <= s < len` and `0 <= s + k < len`.
pub(crate) fn diagonal_range(len: usize, k: isize) -> (usize, usize) {
    let from = if k < 0 { (-k) as usize } else { 0 };
    let to = if k > 0 {
        len.saturating_sub(k as usize)
    } else {
        len
    };
    (from.min(to), to)
}

impl<T: Real> MatrixOperator<T> for DenseMatrix<T> {
    fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows()
    }

    fn entry(&self, i: usize, j: usize) -> Cx<T> {
        self.get(i, j)
    }

    fn frobenius_norm_sq(&self) -> T {
        DenseMatrix::frobenius_norm_sq(self)
    }

    fn to_dense(&self) -> DenseMatrix<T> {
        self.clone()
    }

    fn as_sym_tridiagonal(&self) -> Option<SymTridiagonal<T>> {
        let (d, e) = self.as_real_symmetric_tridiagonal()?;
        SymTridiagonal::new(d, e).ok()
    }

    fn hermitian_eigenvalues(&self, tol: T) -> Result<EigenResult<T>> {
        hermitian_eigenvalues(self, tol)
    }

    fn singular_values(&self, tol: T) -> Result<EigenResult<T>> {
        singular_values(self, tol)
    }
}

impl<T: Real> MatrixOperator<T> for SymTridiagonal<T> {
    fn dim(&self) -> usize {
        SymTridiagonal::dim(self)
    }

    fn entry(&self, i: usize, j: usize) -> Cx<T> {
        Complex::new(self.get(i, j), T::zero())
    }

    fn block_diagonal_sum(&self, start: usize, len: usize, k: isize) -> Cx<T> {
        let src = match k {
            0 => &self.diag()[start..start + len],
            1 | -1 if len > 0 => &self.off_diag()[start..start + len - 1],
            _ => return Cx::zero(),
        };
        Complex::new(src.iter().copied().sum(), T::zero())
    }

    fn frobenius_norm_sq(&self) -> T {
        SymTridiagonal::frobenius_norm_sq(self)
    }

    fn to_dense(&self) -> DenseMatrix<T> {
        SymTridiagonal::to_dense(self)
    }

    fn as_sym_tridiagonal(&self) -> Option<SymTridiagonal<T>> {
        Some(self.clone())
    }
}
