//! Distribution diagnostics: Weyl residuals against a symbol, zero-distribution
//! trends, the SVD-tail seminorm estimate, a.c.s. distances and G-norms.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::MatrixOperator;
use crate::scalar::Real;
use crate::symbol::{midpoint_grid, BivariateSymbol};
use crate::EIGEN_TOL;

/// Nodes per axis of the tensor midpoint rule for symbol integrals.
pub const WEYL_GRID: usize = 256;

/// Shape of a test function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TestFunctionKind {
    /// `exp(-(t - center)^2 / width)` on `|t - center| < 4 sqrt(width)`, zero outside.
    Gaussian { center: f64, width: f64 },
    /// `max(0, 1 - t^2 / radius^2)`.
    QuadraticHat { radius: f64 },
}

/// Compactly supported test function `F`, times a constant factor.
#[derive(Clone, Debug, PartialEq)]
pub struct TestFunction {
    label: String,
    kind: TestFunctionKind,
    factor: f64,
}

impl TestFunction {
    pub fn gaussian(center: f64, width: f64) -> Self {
        Self {
            label: format!("gauss(c={center},w={width})"),
            kind: TestFunctionKind::Gaussian { center, width },
            factor: 1.0,
        }
    }

    pub fn quadratic_hat(radius: f64) -> Self {
        Self {
            label: format!("hat(r={radius})"),
            kind: TestFunctionKind::QuadraticHat { radius },
            factor: 1.0,
        }
    }

    /// `s F`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            label: self.label.clone(),
            kind: self.kind,
            factor: self.factor * s,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> TestFunctionKind {
        self.kind
    }

    /// `F(t) = 0` for `|t|` beyond this bound.
    pub fn support_bound(&self) -> f64 {
        match self.kind {
            TestFunctionKind::Gaussian { center, width } => center.abs() + 4.0 * width.sqrt(),
            TestFunctionKind::QuadraticHat { radius } => radius.abs(),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let v = match self.kind {
            TestFunctionKind::Gaussian { center, width } => {
                let d = t - center;
                if d.abs() < 4.0 * width.sqrt() {
                    (-d * d / width).exp()
                } else {
                    0.0
                }
            }
            TestFunctionKind::QuadraticHat { radius } => (1.0 - t * t / (radius * radius)).max(0.0),
        };
        self.factor * v
    }
}

/// Ordered collection of test functions.
#[derive(Clone, Debug, PartialEq)]
pub struct TestFunctionSet {
    functions: Vec<TestFunction>,
}

impl Default for TestFunctionSet {
    /// Gaussians with centres 0, 2, 4, 8 and widths 1, 4, then the hat of radius 5.
    fn default() -> Self {
        let mut functions = Vec::new();
        for c in [0.0, 2.0, 4.0, 8.0] {
            for w in [1.0, 4.0] {
                functions.push(TestFunction::gaussian(c, w));
            }
        }
        functions.push(TestFunction::quadratic_hat(5.0));
        Self { functions }
    }
}

impl TestFunctionSet {
    pub fn new(functions: Vec<TestFunction>) -> Self {
        Self { functions }
    }

    pub fn iter(&self) -> impl Iterator<Item = &TestFunction> {
        self.functions.iter()
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            functions: self.functions.iter().map(|f| f.scaled(s)).collect(),
        }
    }
}

/// `|(1/n) sum F(lambda_i) - (1/2pi) int int F(f)|` for one test function.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylResidual {
    pub label: String,
    pub empirical: f64,
    pub integral: f64,
    pub residual: f64,
}

/// Residuals from precomputed spectral values and symbol samples (each sample
/// weighted equally).
pub fn weyl_residuals_from_values(
    values: &[f64],
    samples: &[f64],
    fs: &TestFunctionSet,
) -> Vec<WeylResidual> {
    fs.iter()
        .map(|f| {
            let empirical = values.iter().map(|&v| f.eval(v)).sum::<f64>() / values.len() as f64;
            let integral = samples.iter().map(|&v| f.eval(v)).sum::<f64>() / samples.len() as f64;
            WeylResidual {
                label: f.label().to_string(),
                empirical,
                integral,
                residual: (empirical - integral).abs(),
            }
        })
        .collect()
}

/// Symbol values on the midpoint grid of `[0, 1] x [-pi, pi]`.
fn symbol_on_grid(symbol: &dyn BivariateSymbol) -> Result<Vec<num_complex::Complex64>> {
    let (xs, ts) = midpoint_grid(WEYL_GRID);
    symbol.eval_grid(&xs, &ts)
}

/// Eigenvalue distribution test of a Hermitian matrix against a real symbol.
pub fn weyl_eig_residual<T: Real, A: MatrixOperator<T> + ?Sized>(
    a: &A,
    symbol: &dyn BivariateSymbol,
    fs: &TestFunctionSet,
) -> Result<Vec<WeylResidual>> {
    let samples = symbol_on_grid(symbol)?;
    let scale = samples.iter().fold(1.0f64, |m, z| m.max(z.re.abs()));
    if let Some(z) = samples.iter().find(|z| z.im.abs() > 1e-8 * scale) {
        return Err(Error::InvalidArgument(format!(
            "eigenvalue test needs a real symbol, found imaginary part {:e}",
            z.im
        )));
    }
    let eig = a.hermitian_eigenvalues(T::of(EIGEN_TOL))?;
    let values: Vec<f64> = eig.values.iter().map(|v| v.to_f64_lossy()).collect();
    let re: Vec<f64> = samples.iter().map(|z| z.re).collect();
    Ok(weyl_residuals_from_values(&values, &re, fs))
}

/// Singular value distribution test against `|f|`.
pub fn weyl_sv_residual<T: Real, A: MatrixOperator<T> + ?Sized>(
    a: &A,
    symbol: &dyn BivariateSymbol,
    fs: &TestFunctionSet,
) -> Result<Vec<WeylResidual>> {
    let samples = symbol_on_grid(symbol)?;
    let sv = a.singular_values(T::of(EIGEN_TOL))?;
    let values: Vec<f64> = sv.values.iter().map(|v| v.to_f64_lossy()).collect();
    let abs: Vec<f64> = samples.iter().map(|z| z.norm()).collect();
    Ok(weyl_residuals_from_values(&values, &abs, fs))
}

/// `||A||_F^2 / n`, the finite-order squared G-norm.
pub fn gnorm_squared<T: Real, A: MatrixOperator<T> + ?Sized>(a: &A) -> T {
    a.frobenius_norm_sq() / T::of_usize(a.dim().max(1))
}

/// `||Z_n||_F^2 / n` along a sequence of orders.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroDistTrend {
    pub ns: Vec<usize>,
    pub values: Vec<f64>,
    /// Last value at most a quarter of the first and below `1e-2`. A heuristic,
    /// not a proof.
    pub consistent: bool,
}

pub fn zero_dist_trend<T: Real, M: MatrixOperator<T>>(
    family: impl Fn(usize) -> Result<M>,
    ns: &[usize],
) -> Result<ZeroDistTrend> {
    if ns.is_empty() || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "orders must be non-empty and increasing".into(),
        ));
    }
    let values = ns
        .iter()
        .map(|&n| Ok(gnorm_squared(&family(n)?).to_f64_lossy()))
        .collect::<Result<Vec<f64>>>()?;
    let (first, last) = (values[0], values[values.len() - 1]);
    Ok(ZeroDistTrend {
        ns: ns.to_vec(),
        consistent: last <= first / 4.0 && last < 1e-2,
        values,
    })
}

/// `q_r(A) = sqrt(sum_{i > r} sigma_i^2 / n)` at the requested ranks.
#[derive(Clone, Debug, PartialEq)]
pub struct QCurve {
    pub ranks: Vec<usize>,
    pub values: Vec<f64>,
    /// `q_{floor(sqrt n)}`.
    pub scalar: f64,
}

/// `0, 1, 2, 4, ...` below `n`, plus `floor(sqrt n)`.
pub fn default_ranks(n: usize) -> Vec<usize> {
    let mut r: Vec<usize> = std::iter::once(0)
        .chain(std::iter::successors(Some(1usize), |x| x.checked_mul(2)))
        .take_while(|&x| x < n)
        .collect();
    let s = n.isqrt();
    if s < n {
        r.push(s);
    }
    r.sort_unstable();
    r.dedup();
    r
}

/// Tail sums of `sigma_i^2`: `tails[r] = sum_{i >= r} sigma_i^2` (0-based).
fn tail_sums(sv: &[f64]) -> Vec<f64> {
    let mut tails = vec![0.0; sv.len() + 1];
    for i in (0..sv.len()).rev() {
        tails[i] = tails[i + 1] + sv[i] * sv[i];
    }
    tails
}

pub fn q_estimate<T: Real, A: MatrixOperator<T> + ?Sized>(
    a: &A,
    ranks: &[usize],
) -> Result<QCurve> {
    let n = a.dim();
    if let Some(&r) = ranks.iter().find(|&&r| r >= n) {
        return Err(Error::OutOfRange {
            what: "rank",
            value: r as i64,
            limit: n as i64,
        });
    }
    let sv: Vec<f64> = a
        .singular_values(T::of(EIGEN_TOL))?
        .values
        .iter()
        .map(|v| v.to_f64_lossy())
        .collect();
    let tails = tail_sums(&sv);
    let q = |r: usize| (tails[r.min(n)] / n as f64).sqrt();
    Ok(QCurve {
        ranks: ranks.to_vec(),
        values: ranks.iter().map(|&r| q(r)).collect(),
        scalar: q(n.isqrt()),
    })
}

/// `q_{floor(sqrt n)}(A - B)`, the finite-order a.c.s. distance.
pub fn acs_distance<T: Real, A, B>(a: &A, b: &B) -> Result<f64>
where
    A: MatrixOperator<T> + ?Sized,
    B: MatrixOperator<T> + ?Sized,
{
    if a.dim() != b.dim() {
        return Err(Error::ShapeMismatch {
            op: "acs_distance",
            left: (a.dim(), a.dim()),
            right: (b.dim(), b.dim()),
        });
    }
    if let (Some(ta), Some(tb)) = (a.as_sym_tridiagonal(), b.as_sym_tridiagonal()) {
        return Ok(q_estimate(&ta.sub(&tb)?, &[])?.scalar);
    }
    let diff = a.to_dense().sub(&b.to_dense())?;
    Ok(q_estimate(&diff, &[])?.scalar)
}

/// Named metrics together with the parameters that produced them.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DistributionReport {
    pub n: usize,
    pub m: Option<usize>,
    pub l: Option<usize>,
    pub metrics: BTreeMap<String, f64>,
    pub residuals: Vec<WeylResidual>,
}

impl DistributionReport {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            ..Self::default()
        }
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = Some(m);
        self
    }

    pub fn with_l(mut self, l: usize) -> Self {
        self.l = Some(l);
        self
    }

    pub fn insert(&mut self, label: impl Into<String>, value: f64) -> Result<()> {
        let label = label.into();
        if !value.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "metric {label} is not finite"
            )));
        }
        self.metrics.insert(label, value);
        Ok(())
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.metrics.get(label).copied()
    }
}
