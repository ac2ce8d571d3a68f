use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::dense::DenseMatrix;
use crate::linalg::tridiagonal::SymTridiagonal;
use crate::scalar::{Cx, Real};

/// Maximum number of cyclic Jacobi sweeps.
pub const MAX_SWEEPS: usize = 100;

/// Singular values below this threshold only get a square-root error bound.
const SMALL_SINGULAR: f64 = 1e-4;

/// Eigenvalues (or singular values) sorted non-increasing, with an absolute
/// bound on the distance of each value to the exact spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenResult<T> {
    pub values: Vec<T>,
    pub residual_bound: T,
}

impl<T: Real> EigenResult<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> T {
        self.values.iter().copied().sum()
    }
}

fn effective_tol<T: Real>(tol: T, n: usize) -> T {
    tol.max(T::epsilon() * T::of_usize(n.max(4)))
}

/// Eigenvalues of a Hermitian matrix, sorted non-increasing.
///
/// Real symmetric tridiagonal input goes through Sturm bisection; everything
/// else through cyclic complex Jacobi. `tol` is relative to `||A||_F`: Jacobi
/// stops once the off-diagonal Frobenius norm is below `tol * ||A||_F`, and
/// input whose Hermitian defect exceeds the same threshold is rejected.
pub fn hermitian_eigenvalues<T: Real>(a: &DenseMatrix<T>, tol: T) -> Result<EigenResult<T>> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            op: "hermitian_eigenvalues",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(EigenResult {
            values: vec![],
            residual_bound: T::zero(),
        });
    }
    let norm = a.frobenius_norm();
    let tol = effective_tol(tol, n);
    let defect = a.hermitian_defect();
    if defect > tol * norm {
        return Err(Error::NotHermitian {
            defect: defect.to_f64_lossy(),
            allowed: (tol * norm).to_f64_lossy(),
        });
    }
    if norm.is_zero() {
        return Ok(EigenResult {
            values: vec![T::zero(); n],
            residual_bound: T::zero(),
        });
    }
    if let Some((diag, off)) = a.as_real_symmetric_tridiagonal() {
        if off.iter().all(|v| v.is_zero()) {
            let mut values = diag;
            sort_non_increasing(&mut values);
            return Ok(EigenResult {
                values,
                residual_bound: T::zero(),
            });
        }
        // bisection is cheap, so always run it to full precision
        return Ok(SymTridiagonal::new(diag, off)?.eigenvalues(T::epsilon()));
    }
    jacobi(a, tol, norm)
}

/// Cyclic Jacobi for complex Hermitian matrices (eigenvalues only).
///
/// Each rotation first removes the phase of `a_pq` with a diagonal unitary,
/// then applies the real symmetric 2x2 rotation.
fn jacobi<T: Real>(a: &DenseMatrix<T>, tol: T, norm: T) -> Result<EigenResult<T>> {
    let n = a.rows();
    let half = T::of(0.5);
    // Hermitian part, column-major friendly full storage
    let mut w: Vec<Cx<T>> = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            (a.get(i, j) + a.get(j, i).conj()) * half
        })
        .collect();
    for i in 0..n {
        w[i * n + i].im = T::zero();
    }
    let target = tol * norm;
    let off_norm = |w: &[Cx<T>]| -> T {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += w[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut off = off_norm(&w);
    let mut sweeps = 0;
    while off > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off: off.to_f64_lossy(),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = w[p * n + q];
                let g = apq.norm();
                if g <= T::min_positive_value() {
                    continue;
                }
                let app = w[p * n + p].re;
                let aqq = w[q * n + q].re;
                // skip rotations that cannot change the diagonal in floating point
                if sweeps > 4 && g * T::of(100.0) < T::epsilon() * app.abs().min(aqq.abs()) {
                    w[p * n + q] = Cx::zero();
                    w[q * n + p] = Cx::zero();
                    continue;
                }
                let phase = apq / g; // e^{i phi}
                let theta = (aqq - app) / (g + g);
                let t = {
                    let t = T::one() / (theta.abs() + (theta * theta + T::one()).sqrt());
                    if theta < T::zero() {
                        -t
                    } else {
                        t
                    }
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                let pc = phase.conj();
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = w[k * n + p];
                    let akq = w[k * n + q] * pc;
                    let new_kp = akp * c - akq * s;
                    let new_kq = akp * s + akq * c;
                    w[k * n + p] = new_kp;
                    w[k * n + q] = new_kq;
                    w[p * n + k] = new_kp.conj();
                    w[q * n + k] = new_kq.conj();
                }
                w[p * n + p] = Complex::new(app - t * g, T::zero());
                w[q * n + q] = Complex::new(aqq + t * g, T::zero());
                w[p * n + q] = Cx::zero();
                w[q * n + p] = Cx::zero();
            }
        }
        off = off_norm(&w);
    }
    let mut values: Vec<T> = (0..n).map(|i| w[i * n + i].re).collect();
    sort_non_increasing(&mut values);
    Ok(EigenResult {
        values,
        residual_bound: off,
    })
}

/// Stable non-increasing sort; NaN never occurs since inputs are finite.
pub(crate) fn sort_non_increasing<T: Real>(v: &mut [T]) {
    v.sort_by(|a, b| b.partial_cmp(a).expect("finite values"));
}

/// Singular values sorted non-increasing.
///
/// Exactly Hermitian input uses `|lambda|`; anything else the eigenvalues of
/// the smaller Gram matrix (`A^* A` or `A A^*`). The residual bound is
/// `max_i min(sqrt(d), d / sigma_i)` where `d` is the Gram residual.
pub fn singular_values<T: Real>(a: &DenseMatrix<T>, tol: T) -> Result<EigenResult<T>> {
    let k = a.rows().min(a.cols());
    if k == 0 {
        return Ok(EigenResult {
            values: vec![],
            residual_bound: T::zero(),
        });
    }
    if a.is_square() && a.hermitian_defect().is_zero() {
        let eig = hermitian_eigenvalues(a, tol)?;
        let mut values: Vec<T> = eig.values.iter().map(|v| v.abs()).collect();
        sort_non_increasing(&mut values);
        return Ok(EigenResult {
            values,
            residual_bound: eig.residual_bound,
        });
    }
    let adj = a.adjoint();
    let gram = if a.rows() >= a.cols() {
        adj.matmul(a)?
    } else {
        a.matmul(&adj)?
    };
    let eig = hermitian_eigenvalues(&gram, tol)?;
    Ok(gram_to_singular(eig))
}

pub(crate) fn gram_to_singular<T: Real>(eig: EigenResult<T>) -> EigenResult<T> {
    let d = eig.residual_bound;
    let small = T::of(SMALL_SINGULAR);
    let mut bound = T::zero();
    let values: Vec<T> = eig
        .values
        .iter()
        .map(|&l| {
            let s = l.max(T::zero()).sqrt();
            let b = if s > small {
                (d / s).min(d.sqrt())
            } else {
                d.sqrt()
            };
            bound = bound.max(b);
            s
        })
        .collect();
    EigenResult {
        values,
        residual_bound: bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Cx<f64> {
        Complex::new(re, im)
    }

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> DenseMatrix<f64> {
        let b = DenseMatrix::from_fn(n, n, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
        .unwrap();
        b.add(&b.adjoint()).unwrap()
    }

    #[test]
    fn diagonal_and_zero() {
        let d =
            DenseMatrix::from_real(3, 3, &[3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0]).unwrap();
        assert_eq!(
            hermitian_eigenvalues(&d, 1e-12).unwrap().values,
            vec![3.0, 2.0, 1.0]
        );
        let z = DenseMatrix::<f64>::zeros(4, 4);
        assert_eq!(
            hermitian_eigenvalues(&z, 1e-12).unwrap().values,
            vec![0.0; 4]
        );
    }

    #[test]
    fn jacobi_complex_two_by_two() {
        // [[2, i], [-i, 2]] has eigenvalues 3 and 1
        let a = DenseMatrix::from_row_major(
            2,
            2,
            vec![c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)],
        )
        .unwrap();
        let r = hermitian_eigenvalues(&a, 1e-12).unwrap();
        assert!((r.values[0] - 3.0).abs() < 1e-12 && (r.values[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jacobi_trace_and_frobenius_preserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [3, 5, 9, 16] {
            let a = random_hermitian(n, &mut rng);
            let r = hermitian_eigenvalues(&a, 1e-12).unwrap();
            let norm = a.frobenius_norm();
            assert!((r.sum() - a.trace().re).abs() < 1e-8 * norm);
            let sq: f64 = r.values.iter().map(|v| v * v).sum();
            assert!((sq - a.frobenius_norm_sq()).abs() < 1e-9 * norm * norm);
            assert!(r.residual_bound <= 1e-12 * norm);
            assert!(r.values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn rejects_non_hermitian_and_rectangular() {
        let a = DenseMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            hermitian_eigenvalues(&a, 1e-12),
            Err(Error::NotHermitian { .. })
        ));
        let r = DenseMatrix::<f64>::zeros(2, 3);
        assert!(matches!(
            hermitian_eigenvalues(&r, 1e-12),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn singular_value_examples() {
        let a = DenseMatrix::<f64>::from_real(2, 2, &[0.0, 2.0, 0.0, 0.0]).unwrap();
        let s = singular_values(&a, 1e-12).unwrap();
        assert!((s.values[0] - 2.0).abs() < 1e-12 && s.values[1].abs() < 1e-7);

        // unitary: a rotation times a phase
        let (cs, sn) = (0.3f64.cos(), 0.3f64.sin());
        let u =
            DenseMatrix::from_row_major(2, 2, vec![c(cs, 0.0), c(0.0, sn), c(0.0, sn), c(cs, 0.0)])
                .unwrap();
        for v in singular_values(&u, 1e-12).unwrap().values {
            assert!((v - 1.0).abs() < 1e-10);
        }

        // rank one u v^*
        let uvec = [c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0)];
        let vvec = [c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)];
        let r1 = DenseMatrix::from_fn(3, 3, |i, j| uvec[i] * vvec[j].conj()).unwrap();
        let s = singular_values(&r1, 1e-12).unwrap();
        assert!((s.values[0] - 1.0).abs() < 1e-10);
        assert!(s.values[1] < 1e-7 && s.values[2] < 1e-7);
    }

    #[test]
    fn singular_values_rectangular() {
        let a = DenseMatrix::<f64>::from_real(2, 3, &[3.0, 0.0, 0.0, 0.0, 4.0, 0.0]).unwrap();
        let s = singular_values(&a, 1e-12).unwrap();
        assert_eq!(s.len(), 2);
        assert!((s.values[0] - 4.0).abs() < 1e-12 && (s.values[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn f32_jacobi() {
        let a = DenseMatrix::<f32>::from_real(3, 3, &[2.0, 1.0, 0.5, 1.0, 3.0, 0.0, 0.5, 0.0, 1.0])
            .unwrap();
        let r = hermitian_eigenvalues(&a, 1e-6).unwrap();
        assert!((r.sum() - 6.0).abs() < 1e-5);
    }
}
