//! Symbol coefficients `a_jk = <A, T_jk>` by normalized traces, the truncated
//! symbol `f_l`, and its comparison against the spectrum.

use num_complex::{Complex, Complex64};
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::functions::{Domain, FunctionSpec};
use crate::generators::{basis_truncation, grid, GridSpec, SamplePoint};
use crate::linalg::{frobenius_inner, DenseMatrix, MatrixOperator};
use crate::scalar::{to_c64, Cx, Real};
use crate::EIGEN_TOL;

/// `<A, B>_G = (1/n) tr(B^* A)`.
pub fn glt_inner<T: Real>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> Result<Cx<T>> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            op: "glt_inner",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    Ok(frobenius_inner(a, b)? / T::of_usize(a.rows()))
}

/// `a_jk(n) = <A, T_{n,jk}>_G`, assembling the basis matrix explicitly.
pub fn fourier_coefficient<T: Real>(a: &DenseMatrix<T>, j: i64, k: i64) -> Result<Cx<T>> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            op: "fourier_coefficient",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let t = basis_truncation(j, k, a.rows())?;
    glt_inner(a, &t)
}

/// Same value as [`fourier_coefficient`] from the block diagonal sums:
/// `(1/n) sum_i exp(-2 pi i j i/m) * (sum of the k-th diagonal of block i)`.
pub fn fast_coefficient<T: Real, A: MatrixOperator<T> + ?Sized>(
    a: &A,
    j: i64,
    k: i64,
) -> Result<Cx<T>> {
    fast_coefficient_with(a, j, k, &grid(a.dim()), SamplePoint::Right)
}

/// [`fast_coefficient`] on an explicit grid and block sample point.
pub fn fast_coefficient_with<T: Real, A: MatrixOperator<T> + ?Sized>(
    a: &A,
    j: i64,
    k: i64,
    g: &GridSpec,
    sample: SamplePoint,
) -> Result<Cx<T>> {
    check_grid(a.dim(), g)?;
    if k.unsigned_abs() as usize >= g.p {
        return Err(Error::OutOfRange {
            what: "|k|",
            value: k.abs(),
            limit: g.p as i64,
        });
    }
    let sums = block_sums(a, g, k as isize);
    Ok(combine(&sums, j, g, sample) / T::of_usize(g.n))
}

fn check_grid(n: usize, g: &GridSpec) -> Result<()> {
    if n == 0 || g.n != n || g.m == 0 {
        return Err(Error::InvalidArgument(format!(
            "grid of order {} does not fit a matrix of order {n}",
            g.n
        )));
    }
    Ok(())
}

fn block_sums<T: Real, A: MatrixOperator<T> + ?Sized>(a: &A, g: &GridSpec, k: isize) -> Vec<Cx<T>> {
    (1..=g.m)
        .map(|b| a.block_diagonal_sum(g.index(b, 0), g.p, k))
        .collect()
}

fn combine<T: Real>(sums: &[Cx<T>], j: i64, g: &GridSpec, sample: SamplePoint) -> Cx<T> {
    sums.iter().enumerate().fold(Cx::zero(), |acc, (i, s)| {
        acc + sample.conj_phase::<T>(j, i + 1, g.m) * s
    })
}

/// How raw traces are turned into symbol coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Normalization {
    /// The plain normalized trace `(1/n) tr(T_jk^* A)`.
    Trace,
    /// Divide by the finite-order basis norm `<T_jk, T_jk>_G = m (p - |k|)/n`:
    /// the orthogonal projection onto `T_jk`. Both agree as `n -> infinity`.
    Projection,
}

/// Extraction settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExtractOptions {
    pub normalization: Normalization,
    pub sample: SamplePoint,
}

impl Default for ExtractOptions {
    /// Projection with block midpoints.
    fn default() -> Self {
        Self {
            normalization: Normalization::Projection,
            sample: SamplePoint::Midpoint,
        }
    }
}

impl ExtractOptions {
    /// Plain traces against `T_{n,jk}` exactly as defined.
    pub fn literal() -> Self {
        Self {
            normalization: Normalization::Trace,
            sample: SamplePoint::Right,
        }
    }
}

/// Table of `a_jk`, `|j| <= l_x`, `|k| <= l_theta`, representing
/// `f_l(x, theta) = sum a_jk exp(2 pi i j x) exp(i k theta)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolCoeffs<T> {
    l_x: usize,
    l_theta: usize,
    table: Vec<Cx<T>>,
    extraction_size: usize,
    source: String,
    options: ExtractOptions,
    hermitian_defect: T,
}

impl<T: Real> SymbolCoeffs<T> {
    /// Table from a closure over `(j, k)`.
    pub fn from_fn(l_x: usize, l_theta: usize, mut f: impl FnMut(i64, i64) -> Cx<T>) -> Self {
        let (lx, lt) = (l_x as i64, l_theta as i64);
        let table = (-lx..=lx)
            .flat_map(|j| (-lt..=lt).map(move |k| (j, k)))
            .map(|(j, k)| f(j, k))
            .collect();
        Self::assemble(
            l_x,
            l_theta,
            table,
            0,
            String::new(),
            ExtractOptions::default(),
        )
    }

    fn assemble(
        l_x: usize,
        l_theta: usize,
        table: Vec<Cx<T>>,
        extraction_size: usize,
        source: String,
        options: ExtractOptions,
    ) -> Self {
        let mut c = Self {
            l_x,
            l_theta,
            table,
            extraction_size,
            source,
            options,
            hermitian_defect: T::zero(),
        };
        c.hermitian_defect = c.compute_defect();
        c
    }

    fn compute_defect(&self) -> T {
        let (lx, lt) = (self.l_x as i64, self.l_theta as i64);
        let mut d = T::zero();
        for j in -lx..=lx {
            for k in -lt..=lt {
                d = d.max((self.get(-j, -k) - self.get(j, k).conj()).norm());
            }
        }
        d
    }

    pub fn l_x(&self) -> usize {
        self.l_x
    }

    pub fn l_theta(&self) -> usize {
        self.l_theta
    }

    /// `a_jk`, zero outside the table.
    pub fn get(&self, j: i64, k: i64) -> Cx<T> {
        let (lx, lt) = (self.l_x as i64, self.l_theta as i64);
        if j.abs() > lx || k.abs() > lt {
            return Cx::zero();
        }
        self.table[((j + lx) * (2 * lt + 1) + k + lt) as usize]
    }

    /// `(j, k, a_jk)` with `j` outer, `k` inner, both ascending.
    pub fn iter(&self) -> impl Iterator<Item = (i64, i64, Cx<T>)> + '_ {
        let (lx, lt) = (self.l_x as i64, self.l_theta as i64);
        (-lx..=lx).flat_map(move |j| (-lt..=lt).map(move |k| (j, k, self.get(j, k))))
    }

    /// Order of the matrix the coefficients were extracted from (0 if built by hand).
    pub fn extraction_size(&self) -> usize {
        self.extraction_size
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = source.into();
        self
    }

    pub fn options(&self) -> ExtractOptions {
        self.options
    }

    /// `max |a_{-j,-k} - conj(a_jk)|`; zero up to rounding for Hermitian sources.
    pub fn hermitian_defect(&self) -> T {
        self.hermitian_defect
    }

    /// The sub-table `|j|, |k| <= l`.
    pub fn truncated(&self, l_x: usize, l_theta: usize) -> Self {
        let l_x = l_x.min(self.l_x);
        let l_theta = l_theta.min(self.l_theta);
        let mut t = Self::from_fn(l_x, l_theta, |j, k| self.get(j, k));
        t.extraction_size = self.extraction_size;
        t.source = self.source.clone();
        t.options = self.options;
        t
    }

    /// `f_l` on the tensor grid `xs x thetas`, row-major in `x`.
    ///
    /// Evaluated as `sum_j exp(2 pi i j x) g_j(theta)` with
    /// `g_j(theta) = sum_k a_jk exp(i k theta)`, in `f64`.
    pub fn eval_grid(&self, xs: &[f64], thetas: &[f64]) -> Vec<Complex64> {
        let (lx, lt) = (self.l_x as i64, self.l_theta as i64);
        let g: Vec<Vec<Complex64>> = (-lx..=lx)
            .map(|j| {
                thetas
                    .iter()
                    .map(|&th| {
                        (-lt..=lt)
                            .map(|k| {
                                to_c64(self.get(j, k)) * Complex64::from_polar(1.0, k as f64 * th)
                            })
                            .sum()
                    })
                    .collect()
            })
            .collect();
        let tau = std::f64::consts::TAU;
        let mut out = Vec::with_capacity(xs.len() * thetas.len());
        for &x in xs {
            let ex: Vec<Complex64> = (-lx..=lx)
                .map(|j| Complex64::from_polar(1.0, tau * j as f64 * x))
                .collect();
            for t in 0..thetas.len() {
                out.push(ex.iter().zip(&g).map(|(e, gj)| e * gj[t]).sum());
            }
        }
        out
    }
}

/// `f_l(x, theta) = sum a_jk exp(2 pi i j x) exp(i k theta)`; `theta` wraps periodically.
pub fn eval_symbol<T: Real>(c: &SymbolCoeffs<T>, x: T, theta: T) -> Cx<T> {
    let tau = T::TAU();
    c.iter().fold(Cx::zero(), |acc, (j, k, a)| {
        let phase = tau * T::of(j as f64) * x + T::of(k as f64) * theta;
        acc + a * Complex::from_polar(T::one(), phase)
    })
}

/// Extracts `a_jk` for `|j|, |k| <= l` with the default options.
pub fn extract_symbol<T: Real, A: MatrixOperator<T> + ?Sized>(
    a: &A,
    l: usize,
) -> Result<SymbolCoeffs<T>> {
    extract_symbol_with(a, l, l, ExtractOptions::default())
}

/// Extracts `a_jk` for `|j| <= l_x`, `|k| <= l_theta` on the default grid of
/// `A`. Needs `l_x < m` and `l_theta < p`.
pub fn extract_symbol_with<T: Real, A: MatrixOperator<T> + ?Sized>(
    a: &A,
    l_x: usize,
    l_theta: usize,
    options: ExtractOptions,
) -> Result<SymbolCoeffs<T>> {
    let n = a.dim();
    let g = grid(n);
    check_grid(n, &g)?;
    if l_x >= g.m {
        return Err(Error::OutOfRange {
            what: "l_x",
            value: l_x as i64,
            limit: g.m as i64,
        });
    }
    if l_theta >= g.p {
        return Err(Error::OutOfRange {
            what: "l_theta",
            value: l_theta as i64,
            limit: g.p as i64,
        });
    }
    let (lx, lt) = (l_x as i64, l_theta as i64);
    let sums: Vec<Vec<Cx<T>>> = (-lt..=lt)
        .into_par_iter()
        .map(|k| block_sums(a, &g, k as isize))
        .collect();
    let cells: Vec<(i64, i64)> = (-lx..=lx)
        .flat_map(|j| (-lt..=lt).map(move |k| (j, k)))
        .collect();
    let table = cells
        .par_iter()
        .map(|&(j, k)| {
            let raw = combine(&sums[(k + lt) as usize], j, &g, options.sample) / T::of_usize(n);
            match options.normalization {
                Normalization::Trace => raw,
                Normalization::Projection => {
                    let norm = g.m * (g.p - k.unsigned_abs() as usize);
                    raw * T::of_usize(n) / T::of_usize(norm)
                }
            }
        })
        .collect();
    Ok(SymbolCoeffs::assemble(
        l_x,
        l_theta,
        table,
        n,
        String::new(),
        options,
    ))
}

/// A function of `(x, theta)` on `[0, 1] x [-pi, pi]`.
pub trait BivariateSymbol: Sync {
    fn eval(&self, x: f64, theta: f64) -> Result<Complex64>;

    /// Values on the tensor grid `xs x thetas`, row-major in `x`.
    fn eval_grid(&self, xs: &[f64], thetas: &[f64]) -> Result<Vec<Complex64>> {
        let mut out = Vec::with_capacity(xs.len() * thetas.len());
        for &x in xs {
            for &t in thetas {
                out.push(self.eval(x, t)?);
            }
        }
        Ok(out)
    }
}

impl<T: Real> BivariateSymbol for SymbolCoeffs<T> {
    fn eval(&self, x: f64, theta: f64) -> Result<Complex64> {
        Ok(self.eval_grid(&[x], &[theta])[0])
    }

    fn eval_grid(&self, xs: &[f64], thetas: &[f64]) -> Result<Vec<Complex64>> {
        Ok(SymbolCoeffs::eval_grid(self, xs, thetas))
    }
}

/// `a(x) g(theta)` with `a` on `[0, 1]` and `g` on `[-pi, pi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductSymbol {
    pub a: FunctionSpec,
    pub g: FunctionSpec,
}

impl ProductSymbol {
    pub fn new(a: FunctionSpec, g: FunctionSpec) -> Result<Self> {
        for (f, d) in [(&a, Domain::UnitInterval), (&g, Domain::Torus)] {
            if f.domain() != d {
                return Err(crate::functions::FunctionError::WrongDomain {
                    expected: d,
                    found: f.domain(),
                }
                .into());
            }
        }
        Ok(Self { a, g })
    }
}

impl BivariateSymbol for ProductSymbol {
    fn eval(&self, x: f64, theta: f64) -> Result<Complex64> {
        Ok(self.a.eval(x)? * self.g.eval_periodic(theta)?)
    }

    fn eval_grid(&self, xs: &[f64], thetas: &[f64]) -> Result<Vec<Complex64>> {
        let av: Vec<Complex64> = xs
            .iter()
            .map(|&x| self.a.eval(x))
            .collect::<std::result::Result<_, _>>()?;
        let gv: Vec<Complex64> = thetas
            .iter()
            .map(|&t| self.g.eval_periodic(t))
            .collect::<std::result::Result<_, _>>()?;
        Ok(av
            .iter()
            .flat_map(|a| gv.iter().map(move |g| a * g))
            .collect())
    }
}

/// Any closure `(x, theta) -> value` as a symbol.
pub struct FnSymbol<F>(pub F);

impl<F: Fn(f64, f64) -> Complex64 + Sync> BivariateSymbol for FnSymbol<F> {
    fn eval(&self, x: f64, theta: f64) -> Result<Complex64> {
        Ok((self.0)(x, theta))
    }
}

/// Sorted spectrum against sorted symbol samples.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonVectors<T> {
    /// Eigenvalues, non-increasing (subsampled to `s^2` entries when `n` is not a square).
    pub zeta: Vec<T>,
    /// `Re f_l(j/s, 2 pi k/s)`, `j, k = 0..s-1`, non-increasing.
    pub eta: Vec<T>,
    /// `Im f_l` at the same points, `j` outer, `k` inner.
    pub gamma: Vec<T>,
}

/// Three ways of measuring `zeta - eta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Discrepancy {
    pub euclidean: f64,
    pub rms: f64,
    pub max_abs: f64,
}

impl Discrepancy {
    pub fn between<T: Real>(a: &[T], b: &[T]) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return Err(Error::ShapeMismatch {
                op: "discrepancy",
                left: (a.len(), 1),
                right: (b.len(), 1),
            });
        }
        let diffs = a.iter().zip(b).map(|(x, y)| (*x - *y).to_f64_lossy().abs());
        let (sq, max) = diffs.fold((0.0, 0.0f64), |(s, m), d| (s + d * d, m.max(d)));
        Ok(Self {
            euclidean: sq.sqrt(),
            rms: (sq / a.len() as f64).sqrt(),
            max_abs: max,
        })
    }
}

impl<T: Real> ComparisonVectors<T> {
    pub fn discrepancy(&self) -> Result<Discrepancy> {
        Discrepancy::between(&self.zeta, &self.eta)
    }

    /// `||gamma||_2`.
    pub fn gamma_norm(&self) -> f64 {
        self.gamma
            .iter()
            .map(|g| g.to_f64_lossy().powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// Sample grid `x = j/s`, `theta = 2 pi k/s`, `j, k = 0..s-1`.
pub fn sample_grid(s: usize) -> (Vec<f64>, Vec<f64>) {
    let xs = (0..s).map(|j| j as f64 / s as f64).collect();
    let ts = (0..s)
        .map(|k| std::f64::consts::TAU * k as f64 / s as f64)
        .collect();
    (xs, ts)
}

/// `Re` and `Im` of `f_l` on the `s x s` sample grid, unsorted.
pub fn symbol_samples<T: Real>(c: &SymbolCoeffs<T>, s: usize) -> (Vec<T>, Vec<T>) {
    let (xs, ts) = sample_grid(s);
    let v = c.eval_grid(&xs, &ts);
    (
        v.iter().map(|z| T::of(z.re)).collect(),
        v.iter().map(|z| T::of(z.im)).collect(),
    )
}

/// `s^2` entries of a sorted vector of length `n >= s^2` at uniformly spread
/// positions `floor((t+1) n / s^2) - 1`; the identity when `n = s^2`.
pub fn subsample_sorted<T: Copy>(v: &[T], count: usize) -> Vec<T> {
    let n = v.len();
    (0..count).map(|t| v[(t + 1) * n / count - 1]).collect()
}

/// Sorts non-increasing.
fn sorted_desc<T: Real>(mut v: Vec<T>) -> Vec<T> {
    v.sort_by(|a, b| b.partial_cmp(a).expect("finite values"));
    v
}

/// Eigenvalues of `A` against samples of `f_l` on the `floor(sqrt n)`-square grid.
pub fn comparison_vectors<T: Real, A: MatrixOperator<T> + ?Sized>(
    a: &A,
    c: &SymbolCoeffs<T>,
) -> Result<ComparisonVectors<T>> {
    let eig = a.hermitian_eigenvalues(T::of(EIGEN_TOL))?;
    comparison_from_spectrum(&eig.values, c)
}

/// [`comparison_vectors`] from an already computed non-increasing spectrum.
pub fn comparison_from_spectrum<T: Real>(
    spectrum: &[T],
    c: &SymbolCoeffs<T>,
) -> Result<ComparisonVectors<T>> {
    let n = spectrum.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty spectrum".into()));
    }
    let s = n.isqrt();
    let (re, gamma) = symbol_samples(c, s);
    Ok(ComparisonVectors {
        zeta: subsample_sorted(spectrum, s * s),
        eta: sorted_desc(re),
        gamma,
    })
}

/// Number of midpoint nodes per axis for function-space norms.
pub const L2_GRID: usize = 256;

/// Midpoints of `[0, 1]` and `[-pi, pi]` with `points` nodes each.
pub fn midpoint_grid(points: usize) -> (Vec<f64>, Vec<f64>) {
    let h = 1.0 / points as f64;
    let xs = (0..points).map(|i| (i as f64 + 0.5) * h).collect();
    let ts = (0..points)
        .map(|i| -std::f64::consts::PI + (i as f64 + 0.5) * h * std::f64::consts::TAU)
        .collect();
    (xs, ts)
}

/// `||f - f_l||_2` with the normalized measure `dx dtheta / (2 pi)` on a
/// 256 x 256 midpoint grid.
pub fn symbol_l2_error<T: Real>(c: &SymbolCoeffs<T>, truth: &dyn BivariateSymbol) -> Result<f64> {
    symbol_l2_error_with(c, truth, L2_GRID)
}

pub fn symbol_l2_error_with<T: Real>(
    c: &SymbolCoeffs<T>,
    truth: &dyn BivariateSymbol,
    points: usize,
) -> Result<f64> {
    if points == 0 {
        return Err(Error::InvalidArgument(
            "quadrature needs at least one point".into(),
        ));
    }
    let (xs, ts) = midpoint_grid(points);
    let f = truth.eval_grid(&xs, &ts)?;
    let fl = c.eval_grid(&xs, &ts);
    let sq: f64 = f.iter().zip(&fl).map(|(a, b)| (a - b).norm_sqr()).sum();
    Ok((sq / (points * points) as f64).sqrt())
}
