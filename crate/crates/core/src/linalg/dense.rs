use nalgebra::{DMatrix, SymmetricEigen};

use super::lanczos::{residual_norm, EigenPairs};
use crate::error::{Error, Result};
use crate::operator::SpinPhotonOperator;

/// Lowest `k` eigenpairs by full dense diagonalisation.
pub fn dense_lowest(h: &SpinPhotonOperator, k: usize) -> Result<EigenPairs> {
    if !h.is_hermitian() {
        return Err(Error::InvalidParameter("operator is not symmetric".into()));
    }
    let n = h.dim();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for &(r, c, v) in h.entries() {
        m[(r, c)] = v;
    }
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut pairs = EigenPairs::default();
    for &i in order.iter().take(k.min(n)) {
        let v: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
        let (value, residual) = residual_norm(h, &v);
        pairs.values.push(value);
        pairs.residuals.push(residual);
        pairs.vectors.push(v);
    }
    Ok(pairs)
}
