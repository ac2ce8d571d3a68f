//! Dense complex linear algebra kernel.

mod dense;
mod eigen;
mod operator;
mod tridiagonal;

pub use dense::{direct_sum_pad, frobenius_inner, kron, DenseMatrix};
pub use eigen::{hermitian_eigenvalues, singular_values, EigenResult, MAX_SWEEPS};
pub(crate) use operator::diagonal_range;
pub use operator::MatrixOperator;
pub use tridiagonal::SymTridiagonal;
