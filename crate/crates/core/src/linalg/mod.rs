//! Dense complex linear algebra for small square matrices.

mod decomp;
mod eigen;
pub mod io;
mod matrix;

pub use decomp::{
    absolute_value, apply_function, cartesian, polar, CartesianParts, FunctionPair, PolarParts,
    Side, SpectralForm,
};
pub use eigen::{general_eigenvalues, hermitian_eigen, hermitian_eigenvalues, HermitianEigen};
pub(crate) use eigen::{hermitian_eigenvalues_unchecked, jacobi_eigenvalues, EigenScratch};
pub use matrix::{
    add, adjoint, frobenius_norm, inner, matmul, scale, ComplexMatrix, ComplexScalar, ComplexVector,
};

pub(crate) use matrix::inner_unchecked;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("matrix is not square ({rows} rows, row of length {cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has no entries")]
    Empty,
    #[error("non-finite entry")]
    NonFinite,
    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPsd { eigenvalue: f64 },
    #[error("{routine} did not converge")]
    NoConvergence { routine: &'static str },
    #[error("matrix is not invertible (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotInvertible { min_eigenvalue: f64 },
    #[error("overflow in {routine}")]
    Overflow { routine: &'static str },
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error("malformed matrix file: {0}")]
    Parse(String),
}
