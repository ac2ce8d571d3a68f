//! Matrix families and the table computations of the reproduction run.
//!
//! Coefficients are extracted from a matrix of order `m` (the estimation
//! size); spectra are taken at order `n`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::distribution::{
    acs_distance, default_ranks, q_estimate, weyl_eig_residual, QCurve, TestFunctionSet,
    WeylResidual,
};
use crate::error::{Error, Result};
use crate::functions::{fourier_coeffs_torus, Domain, FourierTable, FunctionSpec};
use crate::generators::{fd_diffusion_tridiagonal, grid, toeplitz, LocallyToeplitz};
use crate::linalg::{DenseMatrix, EigenResult, MatrixOperator, SymTridiagonal};
use crate::scalar::{Cx, Real};
use crate::symbol::{
    comparison_from_spectrum, extract_symbol_with, sample_grid, BivariateSymbol, Discrepancy,
    ExtractOptions, ProductSymbol, SymbolCoeffs,
};
use crate::EIGEN_TOL;

/// Relative threshold below which quadrature coefficients count as zero.
const TRIM: f64 = 1e-13;

/// Fourier coefficients of a generating function given on the torus.
pub fn generating_coefficients(f: &FunctionSpec, max_index: usize) -> Result<FourierTable> {
    let points = f.default_points().max(4 * max_index + 4);
    Ok(fourier_coeffs_torus(f, max_index, points)?.trimmed(TRIM))
}

/// The table made exactly real and even when it is so up to quadrature noise
/// (relative `1e-14`), otherwise unchanged.
pub fn snap_real_even(fhat: &FourierTable) -> FourierTable {
    let scale = fhat
        .iter()
        .fold(f64::MIN_POSITIVE, |m, (_, c)| m.max(c.norm()));
    let tol = 1e-14 * scale;
    let even = fhat
        .iter()
        .all(|(k, c)| c.im.abs() <= tol && (c.re - fhat.get(-k).re).abs() <= tol);
    if !even {
        return fhat.clone();
    }
    let pairs: Vec<(i64, Complex64)> = fhat
        .iter()
        .map(|(k, _)| {
            let (lo, hi) = (fhat.get(-k.abs()).re, fhat.get(k.abs()).re);
            (k, Complex64::new(0.5 * (lo + hi), 0.0))
        })
        .collect();
    FourierTable::from_pairs(&pairs, fhat.domain())
}

/// A sequence `{A_n}` of test matrices.
#[derive(Clone, Debug, PartialEq)]
pub enum MatrixFamily {
    /// `T_n(f)`.
    Toeplitz { fhat: FourierTable },
    /// `LT_n^m(a, f)` with `m = floor(sqrt n)`.
    Lt { a: FunctionSpec, fhat: FourierTable },
    /// Central finite differences for `-(a u')'`.
    FdDiffusion { a: FunctionSpec },
    /// A single user supplied matrix.
    Import { matrix: DenseMatrix<f64> },
}

/// A member of a family in its cheapest exact representation.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyMatrix<T> {
    Dense(DenseMatrix<T>),
    Tridiagonal(SymTridiagonal<T>),
    Lt(LocallyToeplitz<T>),
}

impl MatrixFamily {
    pub fn id(&self) -> &'static str {
        match self {
            MatrixFamily::Toeplitz { .. } => "toeplitz",
            MatrixFamily::Lt { .. } => "lt",
            MatrixFamily::FdDiffusion { .. } => "fd-diffusion",
            MatrixFamily::Import { .. } => "import",
        }
    }

    /// The only admissible order, for imported matrices.
    pub fn fixed_size(&self) -> Option<usize> {
        match self {
            MatrixFamily::Import { matrix } => Some(matrix.rows()),
            _ => None,
        }
    }

    pub fn build<T: Real>(&self, n: usize) -> Result<FamilyMatrix<T>> {
        match self {
            MatrixFamily::Toeplitz { fhat } => {
                let fhat = snap_real_even(fhat);
                if fhat.max_index() <= 1 && n >= 1 {
                    let d = T::of(fhat.get(0).re);
                    let e = T::of(fhat.get(1).re);
                    Ok(FamilyMatrix::Tridiagonal(SymTridiagonal::new(
                        vec![d; n],
                        vec![e; n - 1],
                    )?))
                } else {
                    Ok(FamilyMatrix::Dense(toeplitz(&fhat, n)?))
                }
            }
            MatrixFamily::Lt { a, fhat } => Ok(FamilyMatrix::Lt(LocallyToeplitz::from_functions(
                a,
                &snap_real_even(fhat),
                n,
                grid(n).m,
            )?)),
            MatrixFamily::FdDiffusion { a } => {
                Ok(FamilyMatrix::Tridiagonal(fd_diffusion_tridiagonal(a, n)?))
            }
            MatrixFamily::Import { matrix } => {
                if matrix.rows() != n {
                    return Err(Error::InvalidArgument(format!(
                        "imported matrix has order {}, requested {n}",
                        matrix.rows()
                    )));
                }
                Ok(FamilyMatrix::Dense(matrix.map_scalar()))
            }
        }
    }

    /// The symbol the family is known to have, if any: `a(x)(2 - 2 cos theta)`
    /// for finite differences, `f` or `a f` for (locally) Toeplitz families.
    pub fn default_truth(&self) -> Option<ProductSymbol> {
        let one = FunctionSpec::builtin("one")?;
        let (a, g) = match self {
            MatrixFamily::Toeplitz { fhat } => (
                one,
                FunctionSpec::fourier(fhat.iter().collect(), Domain::Torus).ok()?,
            ),
            MatrixFamily::Lt { a, fhat } => (
                a.clone(),
                FunctionSpec::fourier(fhat.iter().collect(), Domain::Torus).ok()?,
            ),
            MatrixFamily::FdDiffusion { a } => (a.clone(), FunctionSpec::builtin("laplacian")?),
            MatrixFamily::Import { .. } => return None,
        };
        ProductSymbol::new(a, g).ok()
    }
}

impl<T: Real> MatrixOperator<T> for FamilyMatrix<T> {
    fn dim(&self) -> usize {
        match self {
            FamilyMatrix::Dense(m) => MatrixOperator::dim(m),
            FamilyMatrix::Tridiagonal(m) => MatrixOperator::dim(m),
            FamilyMatrix::Lt(m) => MatrixOperator::dim(m),
        }
    }

    fn entry(&self, i: usize, j: usize) -> Cx<T> {
        match self {
            FamilyMatrix::Dense(m) => m.entry(i, j),
            FamilyMatrix::Tridiagonal(m) => m.entry(i, j),
            FamilyMatrix::Lt(m) => m.entry(i, j),
        }
    }

    fn block_diagonal_sum(&self, start: usize, len: usize, k: isize) -> Cx<T> {
        match self {
            FamilyMatrix::Dense(m) => m.block_diagonal_sum(start, len, k),
            FamilyMatrix::Tridiagonal(m) => m.block_diagonal_sum(start, len, k),
            FamilyMatrix::Lt(m) => m.block_diagonal_sum(start, len, k),
        }
    }

    fn frobenius_norm_sq(&self) -> T {
        match self {
            FamilyMatrix::Dense(m) => MatrixOperator::frobenius_norm_sq(m),
            FamilyMatrix::Tridiagonal(m) => MatrixOperator::frobenius_norm_sq(m),
            FamilyMatrix::Lt(m) => MatrixOperator::frobenius_norm_sq(m),
        }
    }

    fn to_dense(&self) -> DenseMatrix<T> {
        match self {
            FamilyMatrix::Dense(m) => m.clone(),
            FamilyMatrix::Tridiagonal(m) => m.to_dense(),
            FamilyMatrix::Lt(m) => MatrixOperator::to_dense(m),
        }
    }

    fn as_sym_tridiagonal(&self) -> Option<SymTridiagonal<T>> {
        match self {
            FamilyMatrix::Dense(m) => m.as_sym_tridiagonal(),
            FamilyMatrix::Tridiagonal(m) => Some(m.clone()),
            FamilyMatrix::Lt(m) => m.as_sym_tridiagonal(),
        }
    }

    fn hermitian_eigenvalues(&self, tol: T) -> Result<EigenResult<T>> {
        match self {
            FamilyMatrix::Dense(m) => m.hermitian_eigenvalues(tol),
            FamilyMatrix::Tridiagonal(m) => m.hermitian_eigenvalues(tol),
            FamilyMatrix::Lt(m) => m.hermitian_eigenvalues(tol),
        }
    }

    fn singular_values(&self, tol: T) -> Result<EigenResult<T>> {
        match self {
            FamilyMatrix::Dense(m) => m.singular_values(tol),
            FamilyMatrix::Tridiagonal(m) => m.singular_values(tol),
            FamilyMatrix::Lt(m) => m.singular_values(tol),
        }
    }
}

/// Largest `l` that can be extracted at order `m`.
pub fn max_l(m: usize) -> Option<usize> {
    let g = grid(m);
    g.m.min(g.p).checked_sub(1)
}

/// Coefficients `|j|, |k| <= l` from the family member of order `m`.
pub fn extract_family(
    family: &MatrixFamily,
    m: usize,
    l: usize,
    options: ExtractOptions,
) -> Result<SymbolCoeffs<f64>> {
    let a = family.build::<f64>(m)?;
    Ok(extract_symbol_with(&a, l, l, options)?.with_source(family.id()))
}

/// Numeric table with optional (`NA`) cells; rows and columns are keyed by
/// integer parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub row_key: &'static str,
    pub col_key: &'static str,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub cells: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        let r = self.rows.iter().position(|&x| x == row)?;
        let c = self.cols.iter().position(|&x| x == col)?;
        self.cells[r][c]
    }

    pub fn row(&self, row: usize) -> Option<&[Option<f64>]> {
        let r = self.rows.iter().position(|&x| x == row)?;
        Some(&self.cells[r])
    }
}

/// `||gamma_n||_2` for truncation `l`, one column per estimation size `m`.
pub fn table1(
    family: &MatrixFamily,
    ms: &[usize],
    n: usize,
    l: usize,
    options: ExtractOptions,
) -> Result<Table> {
    let s = n.isqrt();
    let cells = ms
        .par_iter()
        .map(|&m| {
            if max_l(m).is_none_or(|top| l > top) {
                return Ok(None);
            }
            let c = extract_family(family, m, l, options)?;
            let (xs, ts) = sample_grid(s);
            let v = c.eval_grid(&xs, &ts);
            Ok(Some(v.iter().map(|z| z.im * z.im).sum::<f64>().sqrt()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        row_key: "l",
        col_key: "m",
        rows: vec![l],
        cols: ms.to_vec(),
        cells: vec![cells],
    })
}

/// `zeta_n - eta_n` in three norms, rows `l`, columns `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Table2 {
    pub max_abs: Table,
    pub euclidean: Table,
    pub rms: Table,
    /// Estimation size the coefficients came from.
    pub m: usize,
}

/// Non-increasing spectrum of the family member of order `n`.
pub fn spectrum(family: &MatrixFamily, n: usize) -> Result<Vec<f64>> {
    Ok(family
        .build::<f64>(n)?
        .hermitian_eigenvalues(EIGEN_TOL)?
        .values)
}

pub fn table2(
    family: &MatrixFamily,
    ns: &[usize],
    ls: &[usize],
    m: usize,
    options: ExtractOptions,
) -> Result<Table2> {
    let top = ls.iter().copied().max().unwrap_or(0);
    let coeffs = extract_family(family, m, top, options)?;
    let columns = ns
        .par_iter()
        .map(|&n| {
            let zeta = spectrum(family, n)?;
            ls.iter()
                .map(|&l| {
                    let v = comparison_from_spectrum(&zeta, &coeffs.truncated(l, l))?;
                    Discrepancy::between(&v.zeta, &v.eta)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let pick = |f: fn(&Discrepancy) -> f64| Table {
        row_key: "l",
        col_key: "n",
        rows: ls.to_vec(),
        cols: ns.to_vec(),
        cells: (0..ls.len())
            .map(|r| columns.iter().map(|col| Some(f(&col[r]))).collect())
            .collect(),
    };
    Ok(Table2 {
        max_abs: pick(|d| d.max_abs),
        euclidean: pick(|d| d.euclidean),
        rms: pick(|d| d.rms),
        m,
    })
}

/// `||f - f_l||_2`, rows `l`, columns `m`; `NA` where `l` exceeds what order `m` supports.
pub fn table3(
    family: &MatrixFamily,
    ms: &[usize],
    ls: &[usize],
    truth: &dyn BivariateSymbol,
    options: ExtractOptions,
) -> Result<Table> {
    let columns = ms
        .par_iter()
        .map(|&m| {
            let Some(top) = max_l(m) else {
                return Ok(vec![None; ls.len()]);
            };
            let usable = ls.iter().copied().filter(|&l| l <= top).max();
            let Some(lmax) = usable else {
                return Ok(vec![None; ls.len()]);
            };
            let c = extract_family(family, m, lmax, options)?;
            ls.iter()
                .map(|&l| {
                    if l > top {
                        Ok(None)
                    } else {
                        crate::symbol::symbol_l2_error(&c.truncated(l, l), truth).map(Some)
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        row_key: "l",
        col_key: "m",
        rows: ls.to_vec(),
        cols: ms.to_vec(),
        cells: (0..ls.len())
            .map(|r| columns.iter().map(|c| c[r]).collect())
            .collect(),
    })
}

/// Sorted eigenvalues, sorted `Re f_l` samples and sorted truth samples.
#[derive(Clone, Debug, PartialEq)]
pub struct Figure1 {
    pub n: usize,
    pub l: usize,
    pub m: usize,
    pub zeta: Vec<f64>,
    pub eta: Vec<f64>,
    pub truth: Option<Vec<f64>>,
}

pub fn figure1(
    family: &MatrixFamily,
    n: usize,
    l: usize,
    m: usize,
    truth: Option<&dyn BivariateSymbol>,
    options: ExtractOptions,
) -> Result<Figure1> {
    let c = extract_family(family, m, l, options)?;
    let v = comparison_from_spectrum(&spectrum(family, n)?, &c)?;
    let truth = match truth {
        Some(t) => {
            let (xs, ts) = sample_grid(n.isqrt());
            let mut s: Vec<f64> = t.eval_grid(&xs, &ts)?.iter().map(|z| z.re).collect();
            s.sort_by(|a, b| b.total_cmp(a));
            Some(s)
        }
        None => None,
    };
    Ok(Figure1 {
        n,
        l,
        m,
        zeta: v.zeta,
        eta: v.eta,
        truth,
    })
}

/// Weyl residuals of the family at each order against `truth`.
pub fn weyl_table(
    family: &MatrixFamily,
    ns: &[usize],
    truth: &dyn BivariateSymbol,
    fs: &TestFunctionSet,
) -> Result<Vec<(usize, Vec<WeylResidual>)>> {
    ns.par_iter()
        .map(|&n| Ok((n, weyl_eig_residual(&family.build::<f64>(n)?, truth, fs)?)))
        .collect()
}

/// Locally Toeplitz approximant `LT_n^m(a, g)` of a product symbol with `m = floor(sqrt n)`.
pub fn lt_reference(truth: &ProductSymbol, n: usize) -> Result<LocallyToeplitz<f64>> {
    let g = grid(n);
    let k = g.p.saturating_sub(1).min(32);
    LocallyToeplitz::from_functions(
        &truth.a,
        &snap_real_even(&generating_coefficients(&truth.g, k)?),
        n,
        g.m,
    )
}

/// `q_r(A_n - LT_n)` curves and the a.c.s. distance per order.
pub fn q_table(
    family: &MatrixFamily,
    ns: &[usize],
    truth: &ProductSymbol,
) -> Result<Vec<(usize, QCurve, f64)>> {
    ns.par_iter()
        .map(|&n| {
            let a = family.build::<f64>(n)?;
            let b = lt_reference(truth, n)?;
            let dist = acs_distance(&a, &b)?;
            let curve = match (a.as_sym_tridiagonal(), b.as_sym_tridiagonal()) {
                (Some(x), Some(y)) => q_estimate(&x.sub(&y)?, &default_ranks(n))?,
                _ => q_estimate(
                    &a.to_dense().sub(&MatrixOperator::to_dense(&b))?,
                    &default_ranks(n),
                )?,
            };
            Ok((n, curve, dist))
        })
        .collect()
}

/// G-norms of `LT_n(x^{-1/4}, 1)` and of its square.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CounterexampleRow {
    pub n: usize,
    pub lt: f64,
    pub square: f64,
}

pub fn counterexample(ns: &[usize]) -> Result<Vec<CounterexampleRow>> {
    let a = FunctionSpec::builtin("inverse-quartic-root").expect("builtin exists");
    let one = FourierTable::from_pairs(&[(0, Complex64::new(1.0, 0.0))], Domain::Torus);
    ns.iter()
        .map(|&n| {
            let lt = LocallyToeplitz::<f64>::from_functions(&a, &one, n, grid(n).m)?;
            let sq = lt.square()?;
            Ok(CounterexampleRow {
                n,
                lt: crate::distribution::gnorm_squared(&lt),
                square: crate::distribution::gnorm_squared(&sq),
            })
        })
        .collect()
}
