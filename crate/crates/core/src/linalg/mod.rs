//! Eigensolvers used by the exact-diagonalisation layer.

pub mod banded;
pub mod dense;
pub mod lanczos;
pub mod tridiag;

pub use banded::BandedCholesky;
pub use dense::dense_lowest;
pub use lanczos::{krylov_lowest, EigenPairs, KrylovOptions};

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += alpha * x`
pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}
