//! Shift-invert Lanczos for the low end of a sparse symmetric spectrum.
//!
//! A short plain Lanczos run locates the bottom of the spectrum, then a shift
//! `sigma` is lowered until `H - sigma` admits a banded Cholesky factor, which
//! certifies `sigma < E_0`. Lanczos on `(H - sigma)^{-1}` with full
//! reorthogonalisation converges to the lowest levels in a few dozen steps.
//! Converged pairs are locked and the iteration restarted from a fresh random
//! vector orthogonal to them, so that exactly degenerate levels, which a
//! single Krylov space can only see once, are recovered.

use log::debug;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::banded::BandedCholesky;
use super::tridiag::tridiagonal_eigen;
use super::{axpy, dot, norm};
use crate::error::{Error, Result};
use crate::operator::SpinPhotonOperator;

/// Eigenpairs sorted by ascending eigenvalue.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    /// `‖H v - E v‖` for each pair.
    pub residuals: Vec<f64>,
}

impl EigenPairs {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KrylovOptions {
    /// Pairs are accepted once `‖H v - E v‖ <= tol * max(1, |E|)`.
    pub tol: f64,
    /// Krylov steps per restart.
    pub max_steps: usize,
    pub max_restarts: usize,
    pub seed: u64,
    pub probe_steps: usize,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_steps: 300,
            max_restarts: 12,
            seed: 0x5eed_d1c4,
            probe_steps: 40,
        }
    }
}

/// Rayleigh quotient of a unit vector and its residual norm.
pub(crate) fn residual_norm(h: &SpinPhotonOperator, v: &[f64]) -> (f64, f64) {
    let mut hv = vec![0.0; v.len()];
    h.matvec_into(v, &mut hv);
    let value = dot(v, &hv);
    axpy(-value, v, &mut hv);
    (value, norm(&hv))
}

fn orthogonalize<'a>(w: &mut [f64], against: impl Iterator<Item = &'a Vec<f64>> + Clone) {
    for _ in 0..2 {
        for v in against.clone() {
            let c = dot(v, w);
            axpy(-c, v, w);
        }
    }
}

fn random_start(rng: &mut ChaCha8Rng, n: usize, locked: &[Vec<f64>]) -> Option<Vec<f64>> {
    let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let before = norm(&v);
    orthogonalize(&mut v, locked.iter());
    let after = norm(&v);
    if after <= 1e-8 * before {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= after);
    Some(v)
}

struct Probe {
    lowest: f64,
    residual: f64,
    scale: f64,
}

/// Plain Lanczos estimate of the lowest eigenvalue.
fn probe(h: &SpinPhotonOperator, start: &[f64], steps: usize) -> Result<Probe> {
    let n = h.dim();
    let mut basis = vec![start.to_vec()];
    let (mut alpha, mut beta) = (Vec::new(), Vec::new());
    let mut w = vec![0.0; n];
    for j in 0..steps.min(n) {
        h.matvec_into(&basis[j], &mut w);
        let a = dot(&w, &basis[j]);
        alpha.push(a);
        orthogonalize(&mut w, basis.iter());
        let b = norm(&w);
        if j + 1 == steps.min(n) || b <= 1e-14 * a.abs().max(1.0) {
            beta.push(b);
            break;
        }
        beta.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    }
    let m = alpha.len();
    let (theta, y) = tridiagonal_eigen(&alpha, &beta[..m - 1])?;
    let scale = theta[0]
        .abs()
        .max(theta[m - 1].abs())
        .max(f64::MIN_POSITIVE);
    Ok(Probe {
        lowest: theta[0],
        residual: (beta[m - 1] * y[0][m - 1]).abs(),
        scale,
    })
}

struct Candidate {
    value: f64,
    vector: Vec<f64>,
    residual: f64,
    converged: bool,
}

/// Ritz pairs of the current shift-invert basis, lowest energies first.
fn extract(
    h: &SpinPhotonOperator,
    sigma: f64,
    basis: &[Vec<f64>],
    alpha: &[f64],
    beta: &[f64],
    count: usize,
    tol: f64,
) -> Result<Vec<Candidate>> {
    let m = alpha.len();
    let (mu, y) = tridiagonal_eigen(alpha, &beta[..m - 1])?;
    let top = mu.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    // E = sigma + 1/mu; Ritz values near zero belong to the far spectrum
    let mut order: Vec<usize> = (0..m).filter(|&i| mu[i].abs() >= 1e-8 * top).collect();
    order.sort_by(|&a, &b| (sigma + 1.0 / mu[a]).total_cmp(&(sigma + 1.0 / mu[b])));
    order
        .into_iter()
        .take(count)
        .map(|i| {
            let mut x = vec![0.0; h.dim()];
            for (coef, v) in y[i].iter().zip(basis) {
                axpy(*coef, v, &mut x);
            }
            let nx = norm(&x);
            x.iter_mut().for_each(|xi| *xi /= nx);
            let (value, residual) = residual_norm(h, &x);
            Ok(Candidate {
                value,
                vector: x,
                residual,
                converged: residual <= tol * value.abs().max(1.0),
            })
        })
        .collect()
}

fn shift_invert_run(
    h: &SpinPhotonOperator,
    chol: &BandedCholesky,
    sigma: f64,
    start: Vec<f64>,
    locked: &[Vec<f64>],
    count: usize,
    opts: &KrylovOptions,
) -> Result<Vec<Candidate>> {
    let n = h.dim();
    let room = n - locked.len();
    let mut basis = vec![start];
    let (mut alpha, mut beta) = (Vec::new(), Vec::new());
    loop {
        let j = basis.len() - 1;
        let mut w = basis[j].clone();
        chol.solve_in_place(&mut w);
        let a = dot(&w, &basis[j]);
        alpha.push(a);
        orthogonalize(&mut w, locked.iter().chain(basis.iter()));
        let b = norm(&w);
        beta.push(b);
        let m = alpha.len();
        let exhausted = b <= 1e-13 * a.abs() || m >= room || m >= opts.max_steps;
        if exhausted || (m >= count && m % 10 == 0) {
            let found = extract(h, sigma, &basis, &alpha, &beta, count.min(m), opts.tol)?;
            if exhausted || found.iter().all(|c| c.converged) {
                debug!("shift-invert run: {m} steps, sigma {sigma:.6e}");
                return Ok(found);
            }
        }
        basis.push(w.iter().map(|x| x / b).collect());
    }
}

/// Lowest `k` eigenpairs of a real symmetric sparse operator.
pub fn krylov_lowest(h: &SpinPhotonOperator, k: usize, opts: &KrylovOptions) -> Result<EigenPairs> {
    if !h.is_hermitian() {
        return Err(Error::InvalidParameter("operator is not symmetric".into()));
    }
    let n = h.dim();
    let k = k.min(n);
    if k == 0 {
        return Ok(EigenPairs::default());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let start = random_start(&mut rng, n, &[]).ok_or(Error::NotConverged {
        iterations: 0,
        residual: f64::NAN,
    })?;
    let p = probe(h, &start, opts.probe_steps)?;

    let mut delta = p.residual.max(1e-9 * p.scale).max(f64::MIN_POSITIVE);
    let mut factored = None;
    for _ in 0..80 {
        let sigma = p.lowest - delta;
        if let Some(chol) = BandedCholesky::factor(h, sigma) {
            factored = Some((sigma, chol));
            break;
        }
        delta *= 4.0;
    }
    let (sigma, chol) = factored.ok_or(Error::NotConverged {
        iterations: 80,
        residual: delta,
    })?;

    let mut locked: Vec<Candidate> = Vec::new();
    let mut first = Some(start);
    for restart in 0..opts.max_restarts {
        let locked_vectors: Vec<Vec<f64>> = locked.iter().map(|c| c.vector.clone()).collect();
        let start = match first.take() {
            Some(v) => v,
            None => match random_start(&mut rng, n, &locked_vectors) {
                Some(v) => v,
                None => break,
            },
        };
        let count = k.min(n - locked.len());
        let found = shift_invert_run(h, &chol, sigma, start, &locked_vectors, count, opts)?;

        let kth = if locked.len() >= k {
            let mut values: Vec<f64> = locked.iter().map(|c| c.value).collect();
            values.sort_by(f64::total_cmp);
            values[k - 1]
        } else {
            f64::INFINITY
        };
        let margin = opts.tol * kth.abs().max(1.0);
        let improves = found.iter().any(|c| c.value < kth - margin);
        let converged: Vec<Candidate> = found.into_iter().filter(|c| c.converged).collect();
        if !improves && locked.len() >= k {
            debug!("krylov_lowest: settled after {restart} restarts");
            break;
        }
        if converged.is_empty() {
            return Err(Error::NotConverged {
                iterations: opts.max_steps,
                residual: f64::NAN,
            });
        }
        locked.extend(converged);
        if locked.len() >= n {
            break;
        }
    }
    if locked.len() < k {
        return Err(Error::NotConverged {
            iterations: opts.max_restarts * opts.max_steps,
            residual: f64::NAN,
        });
    }
    locked.sort_by(|a, b| a.value.total_cmp(&b.value));
    locked.truncate(k);
    let mut pairs = EigenPairs::default();
    for c in locked {
        pairs.values.push(c.value);
        pairs.residuals.push(c.residual);
        pairs.vectors.push(c.vector);
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dense_lowest;

    fn chain(n: usize, twist: f64) -> SpinPhotonOperator {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, (i as f64 * twist).sin() * 3.0 + 0.01 * i as f64));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
            if i + 3 < n {
                t.push((i, i + 3, 0.25));
                t.push((i + 3, i, 0.25));
            }
        }
        SpinPhotonOperator::from_triplets(n, t).unwrap()
    }

    #[test]
    fn matches_dense_oracle() {
        let h = chain(400, 0.37);
        let dense = dense_lowest(&h, 5).unwrap();
        let krylov = krylov_lowest(&h, 5, &KrylovOptions::default()).unwrap();
        for (a, b) in dense.values.iter().zip(&krylov.values) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
        assert!(krylov.max_residual() < 1e-9);
        for (k, v) in krylov.vectors.iter().enumerate() {
            for (l, w) in krylov.vectors.iter().enumerate() {
                let expected = if k == l { 1.0 } else { 0.0 };
                assert!((dot(v, w) - expected).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn finds_exact_degeneracy() {
        // two identical decoupled copies: every level is doubly degenerate
        let base = chain(150, 0.61);
        let mut t: Vec<(usize, usize, f64)> = base.entries().to_vec();
        t.extend(
            base.entries()
                .iter()
                .map(|&(r, c, v)| (r + 150, c + 150, v)),
        );
        let h = SpinPhotonOperator::from_triplets(300, t).unwrap();
        let dense = dense_lowest(&h, 4).unwrap();
        let krylov = krylov_lowest(&h, 4, &KrylovOptions::default()).unwrap();
        assert!((dense.values[0] - dense.values[1]).abs() < 1e-12);
        for (a, b) in dense.values.iter().zip(&krylov.values) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn small_operator_returns_everything() {
        let h = SpinPhotonOperator::diagonal([3.0, -1.0, 2.0]);
        let pairs = krylov_lowest(&h, 10, &KrylovOptions::default()).unwrap();
        assert_eq!(pairs.len(), 3);
        for (a, b) in pairs.values.iter().zip([-1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn seed_makes_runs_reproducible() {
        let h = chain(300, 0.21);
        let a = krylov_lowest(&h, 3, &KrylovOptions::default()).unwrap();
        let b = krylov_lowest(&h, 3, &KrylovOptions::default()).unwrap();
        assert_eq!(a, b);
    }
}
