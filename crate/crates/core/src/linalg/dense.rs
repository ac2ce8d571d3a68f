use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{Cx, Real};

/// Dense complex matrix in row-major order.
///
/// Entries are interleaved `(re, im)` pairs. Every public constructor rejects
/// NaN and infinities, and the value is not mutated after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Cx<T>>,
}

fn checked_len(rows: usize, cols: usize) -> Result<usize> {
    rows.checked_mul(cols)
        .ok_or(Error::DimensionOverflow { rows, cols })
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let len = checked_len(rows, cols).expect("zeros: dimension overflow");
        Self {
            rows,
            cols,
            data: vec![Cx::zero(); len],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Cx::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Cx<T>>) -> Result<Self> {
        let len = checked_len(rows, cols)?;
        if data.len() != len {
            return Err(Error::BadLength {
                rows,
                cols,
                len: data.len(),
            });
        }
        let m = Self { rows, cols, data };
        m.check_finite()?;
        Ok(m)
    }

    pub fn from_real(rows: usize, cols: usize, data: &[T]) -> Result<Self> {
        Self::from_row_major(
            rows,
            cols,
            data.iter().map(|&v| Cx::new(v, T::zero())).collect(),
        )
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Cx<T>,
    ) -> Result<Self> {
        let len = checked_len(rows, cols)?;
        let mut data = Vec::with_capacity(len);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_row_major(rows, cols, data)
    }

    pub fn from_diagonal(diag: &[Cx<T>]) -> Result<Self> {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m.check_finite()?;
        Ok(m)
    }

    /// Internal constructor for results of operations on finite inputs.
    pub(crate) fn from_parts(rows: usize, cols: usize, data: Vec<Cx<T>>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    fn check_finite(&self) -> Result<()> {
        match self
            .data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            Some(idx) => Err(Error::NonFinite {
                row: idx / self.cols.max(1),
                col: idx % self.cols.max(1),
            }),
            None => Ok(()),
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

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Cx<T> {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: Cx<T>) {
        self.data[i * self.cols + j] = v;
    }

    pub fn as_slice(&self) -> &[Cx<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Cx<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self.get(i, j).conj());
            }
        }
        Self::from_parts(self.cols, self.rows, out)
    }

    pub fn trace(&self) -> Cx<T> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm_sq(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn frobenius_norm(&self) -> T {
        self.frobenius_norm_sq().sqrt()
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        Self::from_parts(
            self.rows,
            self.cols,
            self.data.iter().map(|&z| z * s).collect(),
        )
    }

    fn zip_with(
        &self,
        other: &Self,
        op: &'static str,
        f: impl Fn(Cx<T>, Cx<T>) -> Cx<T>,
    ) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(Self::from_parts(
            self.rows,
            self.cols,
            self.data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    /// Matrix product; zero entries of `self` are skipped, so products with
    /// diagonal or banded left factors cost proportionally less.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                op: "matmul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let (n, m) = (self.rows, other.cols);
        let mut out = vec![Cx::zero(); checked_len(n, m)?];
        for i in 0..n {
            let dst = &mut out[i * m..(i + 1) * m];
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for (d, &b) in dst.iter_mut().zip(other.row(k)) {
                    *d += a * b;
                }
            }
        }
        Ok(Self::from_parts(n, m, out))
    }

    pub fn matvec(&self, x: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
        if x.len() != self.cols {
            return Err(Error::ShapeMismatch {
                op: "matvec",
                left: self.shape(),
                right: (x.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    /// `||A - A^*||_F / 2`; zero for exactly Hermitian matrices.
    pub fn hermitian_defect(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let mut lower = T::zero();
        let mut diag = T::zero();
        for i in 0..self.rows {
            for j in 0..i {
                lower += (self.get(i, j) - self.get(j, i).conj()).norm_sqr();
            }
            diag += self.get(i, i).im * self.get(i, i).im;
        }
        // mirrored pairs appear twice in A - A^*, diagonal entries as 2i Im(a_ii)
        (lower * T::of(2.0) + diag * T::of(4.0)).sqrt() / T::of(2.0)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im.is_zero())
    }

    /// Real symmetric tridiagonal view, if the matrix has exactly that structure.
    pub fn as_real_symmetric_tridiagonal(&self) -> Option<(Vec<T>, Vec<T>)> {
        if !self.is_square() || !self.is_real() {
            return None;
        }
        let n = self.rows;
        for i in 0..n {
            let row = self.row(i);
            let lo = i.saturating_sub(1);
            let hi = (i + 1).min(n.saturating_sub(1));
            if row[..lo].iter().any(|z| !z.is_zero()) || row[hi + 1..].iter().any(|z| !z.is_zero())
            {
                return None;
            }
        }
        let diag: Vec<T> = (0..n).map(|i| self.get(i, i).re).collect();
        let mut off = Vec::with_capacity(n.saturating_sub(1));
        for i in 0..n.saturating_sub(1) {
            let lower = self.get(i + 1, i).re;
            if lower != self.get(i, i + 1).re {
                return None;
            }
            off.push(lower);
        }
        Some((diag, off))
    }

    pub fn map_scalar<U: Real>(&self) -> DenseMatrix<U> {
        DenseMatrix::from_parts(
            self.rows,
            self.cols,
            self.data
                .iter()
                .map(|z| Complex::new(U::of(z.re.to_f64_lossy()), U::of(z.im.to_f64_lossy())))
                .collect(),
        )
    }
}

/// Kronecker product: `(A ⊗ B)[i*rB + k, j*cB + l] = A[i,j] * B[k,l]`.
pub fn kron<T: Real>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    let rows = a.rows.checked_mul(b.rows).ok_or(Error::DimensionOverflow {
        rows: a.rows,
        cols: b.rows,
    })?;
    let cols = a.cols.checked_mul(b.cols).ok_or(Error::DimensionOverflow {
        rows: a.cols,
        cols: b.cols,
    })?;
    let mut data = vec![Cx::zero(); checked_len(rows, cols)?];
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a.get(i, j);
            for k in 0..b.rows {
                let base = (i * b.rows + k) * cols + j * b.cols;
                for (l, &bkl) in b.row(k).iter().enumerate() {
                    data[base + l] = aij * bkl;
                }
            }
        }
    }
    Ok(DenseMatrix::from_parts(rows, cols, data))
}

/// `A ⊕ O_{target - n}`: `A` in the leading block, zeros elsewhere.
pub fn direct_sum_pad<T: Real>(a: &DenseMatrix<T>, target: usize) -> Result<DenseMatrix<T>> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            op: "direct_sum_pad",
            rows: a.rows,
            cols: a.cols,
        });
    }
    if target < a.rows {
        return Err(Error::PadTooSmall {
            target,
            order: a.rows,
        });
    }
    let mut out = DenseMatrix::zeros(target, target);
    for i in 0..a.rows {
        out.data[i * target..i * target + a.cols].copy_from_slice(a.row(i));
    }
    Ok(out)
}

/// `tr(B^* A) = sum_ij conj(B[i,j]) A[i,j]`.
pub fn frobenius_inner<T: Real>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> Result<Cx<T>> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            op: "frobenius_inner",
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(a.data
        .iter()
        .zip(&b.data)
        .map(|(&x, &y)| y.conj() * x)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Cx<f64> {
        Complex::new(re, im)
    }

    fn real(rows: usize, cols: usize, v: &[f64]) -> DenseMatrix<f64> {
        DenseMatrix::from_real(rows, cols, v).unwrap()
    }

    #[test]
    fn kron_identity_gives_block_diagonal() {
        let b = real(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let k = kron(&DenseMatrix::identity(2), &b).unwrap();
        let expect = real(
            4,
            4,
            &[
                1.0, 2.0, 0.0, 0.0, //
                3.0, 4.0, 0.0, 0.0, //
                0.0, 0.0, 1.0, 2.0, //
                0.0, 0.0, 3.0, 4.0,
            ],
        );
        assert_eq!(k, expect);
    }

    #[test]
    fn kron_scalar_block_and_nilpotent() {
        let d = real(2, 2, &[0.5, 0.0, 0.0, 1.0]);
        assert_eq!(kron(&d, &real(1, 1, &[1.0])).unwrap(), d);

        let n = real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let k = kron(&n, &real(1, 1, &[2.0])).unwrap();
        assert_eq!(k, real(2, 2, &[0.0, 2.0, 0.0, 0.0]));
    }

    #[test]
    fn kron_rectangular_shape() {
        let a = DenseMatrix::<f64>::zeros(2, 3);
        let b = DenseMatrix::<f64>::zeros(4, 5);
        assert_eq!(kron(&a, &b).unwrap().shape(), (8, 15));
    }

    #[test]
    fn pad_cases() {
        let p = direct_sum_pad(&DenseMatrix::<f64>::identity(2), 3).unwrap();
        assert_eq!(
            p,
            real(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0])
        );

        let a = real(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(direct_sum_pad(&a, 2).unwrap(), a);

        let block = DenseMatrix::from_fn(4, 4, |i, j| c((i * 4 + j + 1) as f64, 0.0)).unwrap();
        let p = direct_sum_pad(&block, 5).unwrap();
        assert_eq!(p.shape(), (5, 5));
        for i in 0..5 {
            for j in 0..5 {
                let expect = if i < 4 && j < 4 {
                    block.get(i, j)
                } else {
                    c(0.0, 0.0)
                };
                assert_eq!(p.get(i, j), expect);
            }
        }
    }

    #[test]
    fn pad_rejects_small_target() {
        let err = direct_sum_pad(&DenseMatrix::<f64>::identity(3), 2).unwrap_err();
        assert_eq!(
            err,
            Error::PadTooSmall {
                target: 2,
                order: 3
            }
        );
        assert!(matches!(
            direct_sum_pad(&DenseMatrix::<f64>::zeros(2, 3), 4),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn inner_product_cases() {
        let i4 = DenseMatrix::<f64>::identity(4);
        assert_eq!(frobenius_inner(&i4, &i4).unwrap(), c(4.0, 0.0));

        let a = DenseMatrix::from_fn(3, 3, |i, j| c(i as f64 - 1.0, j as f64 * 0.5)).unwrap();
        let ip = frobenius_inner(&a, &a).unwrap();
        assert!((ip.re - a.frobenius_norm_sq()).abs() < 1e-14 && ip.im == 0.0);

        let shift = real(3, 3, &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        assert_eq!(
            frobenius_inner(&shift, &DenseMatrix::identity(3)).unwrap(),
            c(0.0, 0.0)
        );

        assert!(matches!(
            frobenius_inner(&i4, &DenseMatrix::identity(3)),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn constructors_reject_non_finite() {
        let err = DenseMatrix::from_real(2, 2, &[1.0, f64::NAN, 0.0, 0.0]).unwrap_err();
        assert_eq!(err, Error::NonFinite { row: 0, col: 1 });
        assert!(DenseMatrix::from_fn(2, 2, |i, _| c(
            0.0,
            if i == 1 { f64::INFINITY } else { 0.0 }
        ))
        .is_err());
        assert!(matches!(
            DenseMatrix::<f64>::from_row_major(2, 2, vec![c(0.0, 0.0); 3]),
            Err(Error::BadLength { .. })
        ));
    }

    #[test]
    fn tridiagonal_detection() {
        let t = real(3, 3, &[2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0]);
        let (d, e) = t.as_real_symmetric_tridiagonal().unwrap();
        assert_eq!(d, vec![2.0; 3]);
        assert_eq!(e, vec![-1.0; 2]);
        let full = real(3, 3, &[2.0, -1.0, 0.5, -1.0, 2.0, -1.0, 0.5, -1.0, 2.0]);
        assert!(full.as_real_symmetric_tridiagonal().is_none());
    }

    #[test]
    fn hermitian_defect_detects_asymmetry() {
        let h = DenseMatrix::from_row_major(
            2,
            2,
            vec![c(1.0, 0.0), c(0.0, 2.0), c(0.0, -2.0), c(3.0, 0.0)],
        )
        .unwrap();
        assert_eq!(h.hermitian_defect(), 0.0);
        let nh = real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(nh.hermitian_defect() > 0.5);
    }
}
