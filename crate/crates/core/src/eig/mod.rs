//! Dense linear-algebra kernels: tridiagonal and Hermitian eigensolvers, the
//! Cholesky-reduced generalized eigenproblem, and cubic splines.

mod dense;
mod gep;
mod hermitian;
mod scalar;
mod spline;
pub(crate) mod tridiag;

pub use dense::SquareMatrix;
pub use gep::{
    clip_unit_interval, generalized_hermitian_eigen, generalized_hermitian_eigen_with, CholeskyFactor, GepOptions,
    CLIP_TOLERANCE, RANGE_TOLERANCE, RIDGE_SCHEDULE,
};
pub use hermitian::hermitian_eigen;
pub use scalar::{dot_c, norm2, Scalar};
pub use spline::CubicSpline;
pub use tridiag::{tridiagonal_eigen, tridiagonal_eigenvalues, TridiagonalEigen};

/// Eigenvalues, descending, with the matching eigenvectors when requested.
pub(crate) type RawEigen<T> = (Vec<f64>, Option<Vec<Vec<T>>>);

/// Inner product the eigenvectors are orthonormal under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Identity,
    /// Orthogonal in the metric matrix `M` of the generalized problem.
    Weighted,
}

/// Descending eigenvalues with matching eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenPairs<T> {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<T>>,
    pub metric: Metric,
}

impl<T> EigenPairs<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}
