//! Cholesky factorisation of shifted symmetric band matrices.

use crate::operator::SpinPhotonOperator;

/// Lower band factor `L` with `A - shift = L Lᵀ`, stored row by row:
/// row `i` holds columns `i - bw ..= i`.
#[derive(Debug, Clone)]
pub struct BandedCholesky {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl BandedCholesky {
    /// Factors `a - shift * I` using the lower triangle of `a`. Returns
    /// `None` if a pivot is not strictly positive, which by Sylvester's law
    /// of inertia means `shift` is not below the smallest eigenvalue.
    pub fn factor(a: &SpinPhotonOperator, shift: f64) -> Option<Self> {
        let n = a.dim();
        let bw = a.bandwidth();
        let width = bw + 1;
        let mut data = vec![0.0; n * width];
        for &(r, c, v) in a.entries() {
            if c <= r {
                data[r * width + (c + bw - r)] = v;
            }
        }
        for i in 0..n {
            data[i * width + bw] -= shift;
        }

        for i in 0..n {
            let j0 = i.saturating_sub(bw);
            for j in j0..=i {
                let k0 = j0.max(j.saturating_sub(bw));
                let row_i = &data[i * width + (k0 + bw - i)..i * width + (j + bw - i)];
                let row_j = &data[j * width + (k0 + bw - j)..j * width + bw];
                let dot: f64 = row_i.iter().zip(row_j).map(|(x, y)| x * y).sum();
                let s = data[i * width + (j + bw - i)] - dot;
                if i == j {
                    if !(s > 0.0 && s.is_finite()) {
                        return None;
                    }
                    data[i * width + bw] = s.sqrt();
                } else {
                    data[i * width + (j + bw - i)] = s / data[j * width + bw];
                }
            }
        }
        Some(Self { n, bw, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Overwrites `b` with `(A - shift)^{-1} b`.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let width = self.bw + 1;
        let bw = self.bw;
        for i in 0..self.n {
            let k0 = i.saturating_sub(bw);
            let row = &self.data[i * width + (k0 + bw - i)..i * width + bw];
            let dot: f64 = row.iter().zip(&b[k0..i]).map(|(x, y)| x * y).sum();
            b[i] = (b[i] - dot) / self.data[i * width + bw];
        }
        for i in (0..self.n).rev() {
            b[i] /= self.data[i * width + bw];
            let xi = b[i];
            let k0 = i.saturating_sub(bw);
            let row = &self.data[i * width + (k0 + bw - i)..i * width + bw];
            for (bk, lik) in b[k0..i].iter_mut().zip(row) {
                *bk -= lik * xi;
            }
        }
    }
}
