use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::{Domain, FunctionError, FunctionSpec};

/// Centre-indexed Fourier coefficients `c_k`, `|k| <= max_index`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierTable {
    max_index: usize,
    coeffs: Vec<Complex64>,
    domain: Domain,
}

impl FourierTable {
    /// Table from explicit pairs; repeated indices are summed.
    pub fn from_pairs(pairs: &[(i64, Complex64)], domain: Domain) -> Self {
        let max_index = pairs
            .iter()
            .map(|(k, _)| k.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * max_index + 1];
        for &(k, v) in pairs {
            coeffs[(k + max_index as i64) as usize] += v;
        }
        Self {
            max_index,
            coeffs,
            domain,
        }
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// `c_k`, zero outside the table.
    pub fn get(&self, k: i64) -> Complex64 {
        if k.unsigned_abs() as usize > self.max_index {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + self.max_index as i64) as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let k0 = self.max_index as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (i as i64 - k0, c))
    }

    /// `max_k |c_{-k} - conj(c_k)|`; zero for exactly real sources.
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        (0..=self.max_index as i64)
            .map(|k| (self.get(-k) - self.get(k).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Zeroes coefficients below `rel * max_k |c_k|` and shrinks the table to
    /// the largest remaining index. Quadrature noise on trigonometric
    /// polynomials otherwise turns banded Toeplitz matrices dense.
    pub fn trimmed(&self, rel: f64) -> Self {
        let peak = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let floor = rel * peak;
        let kept: Vec<(i64, Complex64)> = self.iter().filter(|(_, c)| c.norm() > floor).collect();
        let mut t = Self::from_pairs(&kept, self.domain);
        if kept.is_empty() {
            t.coeffs = vec![Complex64::new(0.0, 0.0)];
        }
        t
    }

    /// `sum_k c_k exp(i k theta)` (torus) or `sum_k c_k exp(2 pi i k x)` (unit).
    pub fn eval(&self, t: f64) -> Complex64 {
        let freq = match self.domain {
            Domain::Torus => t,
            Domain::UnitInterval => TAU * t,
        };
        self.iter()
            .map(|(k, c)| c * Complex64::from_polar(1.0, k as f64 * freq))
            .sum()
    }
}

fn check_points(max_index: usize, points: usize) -> Result<(), FunctionError> {
    let needed = 4 * max_index + 4;
    if points < needed {
        return Err(FunctionError::TooFewPoints { points, needed });
    }
    Ok(())
}

/// Accumulates `(1/M) sum_m w_m exp(-i k phi_m)` for `|k| <= K` given samples
/// `w_m` at angles `phi_m`, using the power recurrence for the phases.
fn project(samples: &[(f64, Complex64)], max_index: usize) -> Vec<Complex64> {
    let k0 = max_index as i64;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * max_index + 1];
    for &(phi, w) in samples {
        let step = Complex64::from_polar(1.0, -phi);
        let mut pos = w; // w e^{-i k phi}, k >= 0
        let mut neg = w; // w e^{+i k phi}
        coeffs[k0 as usize] += w;
        for k in 1..=max_index {
            pos *= step;
            neg *= step.conj();
            coeffs[(k0 + k as i64) as usize] += pos;
            coeffs[(k0 - k as i64) as usize] += neg;
        }
    }
    let scale = 1.0 / samples.len() as f64;
    coeffs.iter_mut().for_each(|c| *c *= scale);
    coeffs
}

/// `c_k = (1/2pi) int_{-pi}^{pi} f(t) exp(-i k t) dt` by the `M`-point uniform
/// (trapezoidal / DFT) rule, `|k| <= K`.
///
/// Exact for trigonometric polynomials of degree below `M - K`.
pub fn fourier_coeffs_torus(
    f: &FunctionSpec,
    max_index: usize,
    points: usize,
) -> Result<FourierTable, FunctionError> {
    if f.domain() != Domain::Torus {
        return Err(FunctionError::WrongDomain {
            expected: Domain::Torus,
            found: f.domain(),
        });
    }
    check_points(max_index, points)?;
    let samples = (0..points)
        .map(|m| {
            let t = -PI + TAU * m as f64 / points as f64;
            f.eval(t).map(|v| (t, v))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FourierTable {
        max_index,
        coeffs: project(&samples, max_index),
        domain: Domain::Torus,
    })
}

/// `a_j = int_0^1 a(x) exp(-2 pi i j x) dx` by the `M`-panel composite midpoint
/// rule, `|j| <= J`. Never evaluates at the endpoints, so integrable endpoint
/// singularities are fine.
pub fn fourier_coeffs_unit(
    a: &FunctionSpec,
    max_index: usize,
    points: usize,
) -> Result<FourierTable, FunctionError> {
    if a.domain() != Domain::UnitInterval {
        return Err(FunctionError::WrongDomain {
            expected: Domain::UnitInterval,
            found: a.domain(),
        });
    }
    check_points(max_index, points)?;
    let h = 1.0 / points as f64;
    let samples = (0..points)
        .map(|m| {
            let x = (m as f64 + 0.5) * h;
            a.eval(x).map(|v| (TAU * x, v))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FourierTable {
        max_index,
        coeffs: project(&samples, max_index),
        domain: Domain::UnitInterval,
    })
}
