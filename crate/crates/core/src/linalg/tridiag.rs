//! Symmetric tridiagonal eigenproblems.
//!
//! `diag[i]` is the diagonal and `off[i]` couples `i` and `i + 1`.

use crate::error::{Error, Result};

/// Full eigen-decomposition by the implicit QL algorithm with Wilkinson-type
/// shifts. Eigenvalues come back ascending; `vectors[k]` is the eigenvector
/// of `values[k]`.
pub fn tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = diag.len();
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    if off.len() + 1 < n {
        return Err(Error::DimensionMismatch {
            expected: n - 1,
            found: off.len(),
        });
    }
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(&off[..n - 1]);
    // z[row][col], columns are eigenvectors
    let mut z = vec![vec![0.0; n]; n];
    for (i, row) in z.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 60 {
                return Err(Error::NotConverged {
                    iterations,
                    residual: e[l].abs(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut() {
                    let f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = order
        .iter()
        .map(|&k| z.iter().map(|row| row[k]).collect())
        .collect();
    Ok((values, vectors))
}

/// Number of eigenvalues strictly below `x` (Sturm sequence count).
pub fn count_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let coupling = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { coupling / q };
        if q == 0.0 {
            q = -f64::EPSILON * (diag[i].abs() + x.abs() + f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Lowest eigenvalue by bisection on the Sturm count, to full precision.
pub fn lowest_eigenvalue(diag: &[f64], off: &[f64]) -> f64 {
    let n = diag.len();
    let radius = |i: usize| {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { off[i].abs() } else { 0.0 };
        left + right
    };
    let mut lo = (0..n)
        .map(|i| diag[i] - radius(i))
        .fold(f64::INFINITY, f64::min);
    let mut hi = (0..n)
        .map(|i| diag[i] + radius(i))
        .fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(diag, off, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Solves `(T - shift) x = b` for positive definite `T - shift` by the
/// Thomas algorithm; `b` is overwritten with `x`.
fn solve_shifted(diag: &[f64], off: &[f64], shift: f64, b: &mut [f64]) {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut pivot = diag[0] - shift;
    b[0] /= pivot;
    for i in 1..n {
        c[i - 1] = off[i - 1] / pivot;
        pivot = diag[i] - shift - off[i - 1] * c[i - 1];
        b[i] = (b[i] - off[i - 1] * b[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        b[i] -= c[i] * b[i + 1];
    }
}

/// Lowest eigenpair; the vector has unit Euclidean norm and a positive
/// largest component.
pub fn lowest_eigenpair(diag: &[f64], off: &[f64]) -> (f64, Vec<f64>) {
    let n = diag.len();
    let value = lowest_eigenvalue(diag, off);
    let scale = diag.iter().chain(off).fold(1.0f64, |a, &x| a.max(x.abs()));
    let shift = value - 1e-10 * scale;
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    for _ in 0..4 {
        solve_shifted(diag, off, shift, &mut v);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
    }
    let peak = v
        .iter()
        .copied()
        .fold(0.0f64, |a, x| if x.abs() > a.abs() { x } else { a });
    if peak < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    (value, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian(n: usize) -> (Vec<f64>, Vec<f64>) {
        (vec![2.0; n], vec![-1.0; n - 1])
    }

    fn exact_laplacian(n: usize, k: usize) -> f64 {
        let x = std::f64::consts::PI * (k + 1) as f64 / (n + 1) as f64;
        2.0 - 2.0 * x.cos()
    }

    #[test]
    fn ql_reproduces_laplacian_spectrum() {
        let n = 40;
        let (d, e) = laplacian(n);
        let (values, vectors) = tridiagonal_eigen(&d, &e).unwrap();
        for (k, v) in values.iter().enumerate() {
            assert!((v - exact_laplacian(n, k)).abs() < 1e-13);
        }
        // orthonormal and satisfying T v = λ v
        for (k, v) in vectors.iter().enumerate() {
            for (l, w) in vectors.iter().enumerate() {
                let dot: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
                assert!((dot - f64::from(u8::from(k == l))).abs() < 1e-12);
            }
            for i in 0..n {
                let mut tv = d[i] * v[i];
                if i > 0 {
                    tv += e[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    tv += e[i] * v[i + 1];
                }
                assert!((tv - values[k] * v[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ql_handles_decoupled_blocks() {
        let (values, _) = tridiagonal_eigen(&[3.0, 1.0, 2.0], &[0.0, 0.0]).unwrap();
        assert_eq!(values, vec![1.0, 2.0, 3.0]);
        let (values, vectors) = tridiagonal_eigen(&[5.0], &[]).unwrap();
        assert_eq!(values, vec![5.0]);
        assert_eq!(vectors, vec![vec![1.0]]);
    }

    #[test]
    fn sturm_count_and_bisection() {
        let n = 25;
        let (d, e) = laplacian(n);
        assert_eq!(count_below(&d, &e, 0.0), 0);
        assert_eq!(count_below(&d, &e, 4.0), n);
        assert_eq!(
            count_below(
                &d,
                &e,
                0.5 * (exact_laplacian(n, 2) + exact_laplacian(n, 3))
            ),
            3
        );
        assert!((lowest_eigenvalue(&d, &e) - exact_laplacian(n, 0)).abs() < 1e-14);
        let (value, v) = lowest_eigenpair(&d, &e);
        assert!((value - exact_laplacian(n, 0)).abs() < 1e-14);
        let x = std::f64::consts::PI / (n + 1) as f64;
        let norm = ((n + 1) as f64 / 2.0).sqrt();
        for (i, vi) in v.iter().enumerate() {
            assert!((vi - (x * (i + 1) as f64).sin() / norm).abs() < 1e-10);
        }
    }
}
