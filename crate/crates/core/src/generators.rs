//! Structured matrices: Toeplitz, diagonal sampling, locally Toeplitz, the
//! truncated basis operators and the finite-difference diffusion matrix.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::functions::{FourierTable, FunctionSpec};
use crate::linalg::{DenseMatrix, MatrixOperator, SymTridiagonal};
use crate::scalar::{cast_cx, root_of_unity, Cx, Real};

/// Block bookkeeping for an `n x n` matrix split into `m` diagonal blocks of
/// size `p` plus a zero pad of size `n - m p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub n: usize,
    pub m: usize,
    pub p: usize,
    pub pad: usize,
}

/// Default grid: `m = floor(sqrt(n))` blocks.
pub fn grid(n: usize) -> GridSpec {
    if n == 0 {
        return GridSpec {
            n: 0,
            m: 0,
            p: 0,
            pad: 0,
        };
    }
    let m = n.isqrt();
    GridSpec::from_blocks(n, m)
}

impl GridSpec {
    /// Grid with an explicit block count, `1 <= m <= n`.
    pub fn with_blocks(n: usize, m: usize) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::InvalidArgument(format!(
                "block count m = {m} must satisfy 1 <= m <= n = {n}"
            )));
        }
        Ok(Self::from_blocks(n, m))
    }

    fn from_blocks(n: usize, m: usize) -> Self {
        let p = n / m;
        Self {
            n,
            m,
            p,
            pad: n - m * p,
        }
    }

    /// `I_m = {i/m : i = 1..m}`.
    pub fn points(&self) -> Vec<f64> {
        (1..=self.m).map(|i| i as f64 / self.m as f64).collect()
    }

    /// `B_n`: pairs `(i/m, r)` ordered by block, then by offset inside the block.
    pub fn pairs(&self) -> impl Iterator<Item = (f64, usize)> + '_ {
        (1..=self.m).flat_map(move |i| (0..self.p).map(move |r| (i as f64 / self.m as f64, r)))
    }

    /// Matrix index of offset `r` inside block `i` (1-based).
    pub fn index(&self, block: usize, r: usize) -> usize {
        (block - 1) * self.p + r
    }

    /// Size of the unpadded leading part, `m p`.
    pub fn active(&self) -> usize {
        self.m * self.p
    }
}

/// Where the phase of block `i` is sampled inside `((i-1)/m, i/m]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SamplePoint {
    /// `x = i/m`, the grid `I_m`.
    #[default]
    Right,
    /// `x = (i - 1/2)/m`.
    Midpoint,
}

impl SamplePoint {
    pub fn location(self, block: usize, m: usize) -> f64 {
        match self {
            SamplePoint::Right => block as f64 / m as f64,
            SamplePoint::Midpoint => (block as f64 - 0.5) / m as f64,
        }
    }

    /// `exp(-2 pi i j x_i)` for block `i` (1-based), computed from exact
    /// rational arguments.
    pub(crate) fn conj_phase<T: Real>(self, j: i64, block: usize, m: usize) -> Cx<T> {
        let (num, den) = match self {
            SamplePoint::Right => (block as i64, m as i64),
            SamplePoint::Midpoint => (2 * block as i64 - 1, 2 * m as i64),
        };
        root_of_unity(j * num, den)
    }
}

/// `T_n(f)`: `T[i, j] = fhat_{i-j}`, zero outside the table.
pub fn toeplitz<T: Real>(fhat: &FourierTable, n: usize) -> Result<DenseMatrix<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "toeplitz: n must be at least 1".into(),
        ));
    }
    let coeffs: Vec<Cx<T>> = (-(n as i64 - 1)..n as i64)
        .map(|d| cast_cx(fhat.get(d)))
        .collect();
    DenseMatrix::from_fn(n, n, |i, j| coeffs[i + n - 1 - j])
}

fn samples<T: Real>(a: &FunctionSpec, m: usize, sample: SamplePoint) -> Result<Vec<Cx<T>>> {
    (1..=m)
        .map(|i| Ok(cast_cx(a.eval(sample.location(i, m))?)))
        .collect()
}

/// `D_m(a) = diag(a(1/m), ..., a(m/m))`.
pub fn diag_sample<T: Real>(a: &FunctionSpec, m: usize) -> Result<DenseMatrix<T>> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "diag_sample: m must be at least 1".into(),
        ));
    }
    DenseMatrix::from_diagonal(&samples(a, m, SamplePoint::Right)?)
}

/// `D_m(w) (x) B (+) O_pad`: a block-diagonal matrix with `m` scaled copies of
/// a `p x p` block followed by a zero pad.
///
/// With `B = T_p(f)` this is the locally Toeplitz matrix `LT_n^m(a, f)`; the
/// type is closed under products, so powers of locally Toeplitz matrices stay
/// structured at sizes where the dense form is out of reach.
#[derive(Clone, Debug, PartialEq)]
pub struct LocallyToeplitz<T> {
    weights: Vec<Cx<T>>,
    block: DenseMatrix<T>,
    n: usize,
}

impl<T: Real> LocallyToeplitz<T> {
    pub fn new(weights: Vec<Cx<T>>, block: DenseMatrix<T>, n: usize) -> Result<Self> {
        if !block.is_square() {
            return Err(Error::NotSquare {
                op: "locally Toeplitz block",
                rows: block.rows(),
                cols: block.cols(),
            });
        }
        let active = weights
            .len()
            .checked_mul(block.rows())
            .ok_or(Error::DimensionOverflow {
                rows: weights.len(),
                cols: block.rows(),
            })?;
        if weights.is_empty() || block.rows() == 0 || active > n {
            return Err(Error::InvalidArgument(format!(
                "{} blocks of size {} do not fit in order {n}",
                weights.len(),
                block.rows()
            )));
        }
        if let Some(i) = weights
            .iter()
            .position(|w| !w.re.is_finite() || !w.im.is_finite())
        {
            return Err(Error::NonFinite { row: i, col: i });
        }
        Ok(Self { weights, block, n })
    }

    /// `LT_n^m(a, f)` with `a` sampled at the grid `I_m`.
    pub fn from_functions(
        a: &FunctionSpec,
        fhat: &FourierTable,
        n: usize,
        m: usize,
    ) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::InvalidArgument(format!(
                "block count m = {m} must satisfy 1 <= m <= n = {n}"
            )));
        }
        let weights = samples(a, m, SamplePoint::Right)?;
        Self::new(weights, toeplitz(fhat, n / m)?, n)
    }

    pub fn m(&self) -> usize {
        self.weights.len()
    }

    pub fn p(&self) -> usize {
        self.block.rows()
    }

    pub fn pad(&self) -> usize {
        self.n - self.m() * self.p()
    }

    pub fn weights(&self) -> &[Cx<T>] {
        &self.weights
    }

    pub fn block(&self) -> &DenseMatrix<T> {
        &self.block
    }

    /// Product of two matrices with the same block layout.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.m() != other.m() || self.p() != other.p() {
            return Err(Error::ShapeMismatch {
                op: "locally Toeplitz product",
                left: (self.m(), self.p()),
                right: (other.m(), other.p()),
            });
        }
        let weights = self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| a * b)
            .collect();
        Self::new(weights, self.block.matmul(&other.block)?, self.n)
    }

    pub fn square(&self) -> Result<Self> {
        self.matmul(self)
    }
}

impl<T: Real> MatrixOperator<T> for LocallyToeplitz<T> {
    fn dim(&self) -> usize {
        self.n
    }

    fn entry(&self, i: usize, j: usize) -> Cx<T> {
        let p = self.p();
        let active = self.m() * p;
        if i >= active || j >= active || i / p != j / p {
            return Cx::zero();
        }
        self.weights[i / p] * self.block.get(i % p, j % p)
    }

    fn block_diagonal_sum(&self, start: usize, len: usize, k: isize) -> Cx<T> {
        let p = self.p();
        if len == p && start.is_multiple_of(p) && start / p < self.m() {
            let (from, to) = crate::linalg::diagonal_range(p, k);
            let s: Cx<T> = (from..to)
                .map(|s| self.block.get((s as isize + k) as usize, s))
                .sum();
            return self.weights[start / p] * s;
        }
        let (from, to) = crate::linalg::diagonal_range(len, k);
        (from..to)
            .map(|s| self.entry(start + (s as isize + k) as usize, start + s))
            .sum()
    }

    fn frobenius_norm_sq(&self) -> T {
        let w: T = self.weights.iter().map(|w| w.norm_sqr()).sum();
        w * self.block.frobenius_norm_sq()
    }

    fn to_dense(&self) -> DenseMatrix<T> {
        let n = self.n;
        DenseMatrix::from_fn(n, n, |i, j| self.entry(i, j)).expect("entries are finite")
    }

    fn as_sym_tridiagonal(&self) -> Option<SymTridiagonal<T>> {
        if self.weights.iter().any(|w| !w.im.is_zero()) {
            return None;
        }
        let (bd, be) = self.block.as_real_symmetric_tridiagonal()?;
        let mut diag = Vec::with_capacity(self.n);
        let mut off = Vec::with_capacity(self.n.saturating_sub(1));
        for (b, w) in self.weights.iter().enumerate() {
            if b > 0 {
                off.push(T::zero());
            }
            diag.extend(bd.iter().map(|&d| d * w.re));
            off.extend(be.iter().map(|&e| e * w.re));
        }
        for _ in 0..self.pad() {
            off.push(T::zero());
            diag.push(T::zero());
        }
        SymTridiagonal::new(diag, off).ok()
    }
}

/// `[D_m(a) (x) T_{floor(n/m)}(f)] (+) O_{n mod m}` as a dense `n x n` matrix.
pub fn lt_matrix<T: Real>(
    a: &FunctionSpec,
    fhat: &FourierTable,
    n: usize,
    m: usize,
) -> Result<DenseMatrix<T>> {
    Ok(LocallyToeplitz::from_functions(a, fhat, n, m)?.to_dense())
}

/// `T_{n,jk} = D_m(exp(2 pi i j x)) (x) S_k (+) O_pad` on the default grid of
/// order `n`, where `S_k` has ones on the `k`-th subdiagonal.
pub fn basis_truncation<T: Real>(j: i64, k: i64, n: usize) -> Result<DenseMatrix<T>> {
    let g = grid(n);
    if n == 0 {
        return Err(Error::InvalidArgument(
            "basis_truncation: n must be at least 1".into(),
        ));
    }
    if k.unsigned_abs() as usize >= g.p {
        return Err(Error::OutOfRange {
            what: "|k|",
            value: k.abs(),
            limit: g.p as i64,
        });
    }
    let one = Complex::new(T::one(), T::zero());
    let mut t = DenseMatrix::zeros(n, n);
    for block in 1..=g.m {
        let w: Cx<T> = SamplePoint::Right.conj_phase::<T>(j, block, g.m).conj();
        let start = g.index(block, 0);
        for s in 0..g.p {
            let r = s as i64 + k;
            if (0..g.p as i64).contains(&r) {
                t.set(start + r as usize, start + s, w * one);
            }
        }
    }
    Ok(t)
}

/// Central-difference matrix of `-(a u')'` on `(0, 1)` with `h = 1/(n+1)`:
/// `diag_j = a(x_{j+1/2}) + a(x_{j-1/2})`, `offdiag_j = -a(x_{j+1/2})`.
pub fn fd_diffusion_tridiagonal<T: Real>(a: &FunctionSpec, n: usize) -> Result<SymTridiagonal<T>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "finite-difference matrix needs n >= 2, got {n}"
        )));
    }
    let h = 1.0 / (n + 1) as f64;
    // a at the half points x_{1/2}, x_{3/2}, ..., x_{n+1/2}
    let half: Vec<f64> = (0..=n)
        .map(|j| a.eval_real((j as f64 + 0.5) * h))
        .collect::<std::result::Result<_, _>>()?;
    let diag = (1..=n).map(|j| T::of(half[j] + half[j - 1])).collect();
    let off = (1..n).map(|j| T::of(-half[j])).collect();
    SymTridiagonal::new(diag, off)
}

pub fn fd_diffusion_matrix<T: Real>(a: &FunctionSpec, n: usize) -> Result<DenseMatrix<T>> {
    Ok(fd_diffusion_tridiagonal(a, n)?.to_dense())
}
