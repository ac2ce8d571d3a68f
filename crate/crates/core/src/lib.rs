//! Spectral symbols of generalized locally Toeplitz (GLT) matrix sequences.
//!
//! The symbol of a sequence `{A_n}` is recovered through its Fourier
//! coefficients `a_jk = <A, T_jk>`, where `T_jk` is the truncation of the basis
//! operator with symbol `exp(2 pi i j x) exp(i k theta)` and the inner product
//! is the normalized trace `(1/n) tr(B^* A)`. The crate contains:
//!
//! * [`linalg`]: dense complex matrices, Kronecker assembly, Hermitian and
//!   tridiagonal eigensolvers, singular values;
//! * [`functions`]: coefficient functions `a(x)` and generating functions
//!   `f(theta)`, an expression parser, Fourier coefficients by quadrature;
//! * [`generators`]: Toeplitz, diagonal sampling, locally Toeplitz and basis
//!   matrices, and the finite-difference diffusion matrix;
//! * [`symbol`]: coefficient extraction, symbol evaluation and comparison
//!   against eigenvalues;
//! * [`distribution`]: Weyl residuals, zero-distribution trends, the SVD-tail
//!   seminorm estimate, a.c.s. distances and G-norms;
//! * [`experiment`]: matrix families and the table computations used by the
//!   command line front end.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix the scalar to `f64`.

pub mod distribution;
pub mod error;
pub mod experiment;
pub mod functions;
pub mod generators;
pub mod linalg;
pub mod scalar;
pub mod symbol;

pub use error::{Error, Result};
pub use scalar::{Cx, Real};

pub use distribution::{
    acs_distance, default_ranks, gnorm_squared, q_estimate, weyl_eig_residual,
    weyl_residuals_from_values, weyl_sv_residual, zero_dist_trend, DistributionReport, QCurve,
    TestFunction, TestFunctionSet, WeylResidual, ZeroDistTrend,
};
pub use functions::{
    fourier_coeffs_torus, fourier_coeffs_unit, parse_coefficient_list, parse_complex, parse_expr,
    Domain, FourierTable, FunctionError, FunctionSpec,
};
pub use generators::{
    basis_truncation, diag_sample, fd_diffusion_matrix, fd_diffusion_tridiagonal, grid, lt_matrix,
    toeplitz, GridSpec, LocallyToeplitz, SamplePoint,
};
pub use linalg::{
    direct_sum_pad, frobenius_inner, hermitian_eigenvalues, kron, singular_values, DenseMatrix,
    EigenResult, MatrixOperator, SymTridiagonal,
};
pub use symbol::{
    comparison_from_spectrum, comparison_vectors, eval_symbol, extract_symbol, extract_symbol_with,
    fast_coefficient, fast_coefficient_with, fourier_coefficient, glt_inner, symbol_l2_error,
    BivariateSymbol, ComparisonVectors, Discrepancy, ExtractOptions, FnSymbol, Normalization,
    ProductSymbol, SymbolCoeffs,
};

/// Version of this library, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Default relative tolerance for the eigensolvers.
pub const EIGEN_TOL: f64 = 1e-12;

pub type Matrix = DenseMatrix<f64>;
pub type Matrix32 = DenseMatrix<f32>;
pub type Tridiagonal = SymTridiagonal<f64>;
pub type Tridiagonal32 = SymTridiagonal<f32>;
pub type LtMatrix = LocallyToeplitz<f64>;
pub type Coeffs = SymbolCoeffs<f64>;
pub type Eigen = EigenResult<f64>;
