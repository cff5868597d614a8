//! Dense linear algebra for few-spin problems: spin matrices, tensor
//! products, partial trace/transpose and a Hermitian eigensolver.

mod eigen;
mod matrix;
mod spin;
mod subsystem;

use thiserror::Error;

pub use eigen::{eig_hermitian, eigvals_hermitian, expm_anti_hermitian, HermitianEigen, HERMITIAN_TOL};
pub use matrix::{DenseMatrix, C64};
pub use spin::{spin_operators, SpinOperators};
pub use subsystem::{basis_vector, embed, kron, kron_all, partial_trace, partial_transpose, SiteDims};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("unsupported spin quantum number {0} (expected 1/2 or 1)")]
    UnsupportedSpin(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian within tolerance")]
    NotHermitian,
    #[error("site {site} out of range for {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },
    #[error("invalid site dimensions {0:?}")]
    InvalidDims(Vec<usize>),
    #[error("Jacobi iteration did not converge")]
    NoConvergence,
}
