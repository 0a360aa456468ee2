//! Dense and matrix-free complex Hermitian linear algebra.

mod eigen;
mod lanczos;
mod matrix;
mod operator;

pub use eigen::{
    eigh_dense, eigh_dense_with_tol, fix_phase, group_degenerate, EigenSystem, DEFAULT_DEGENERACY_TOL, HERMITIAN_TOL,
};
pub use lanczos::{eig_lowest_k, eig_lowest_k_with, eig_lowest_manifolds, LanczosOptions};
pub use matrix::{axpy, inner, kron, kron_with_budget, norm, ComplexMatrix, DEFAULT_DENSE_BUDGET_BYTES};
pub use operator::{DiagonalOperator, LinearOperator, MatrixFreeOperator};

/// Largest Hilbert dimension handled with dense matrices (3^7).
pub const DENSE_MAX_DIM: usize = 2187;
