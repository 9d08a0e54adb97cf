//! Sparse operators on the spin ⊗ Fock space.
//!
//! Entries are kept as a coordinate list sorted by `(row, col)` with no
//! duplicates and no stored zeros, which makes row-wise traversal as cheap
//! as CSR while keeping Kronecker products and sector restriction simple.

use std::collections::HashMap;
use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Scalar field of an operator: `f64` or `Complex64`.
pub trait Scalar:
    Copy
    + Debug
    + Default
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + 'static
{
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self;
    fn from_real(x: f64) -> Self;
    fn conj(self) -> Self;
    fn modulus(self) -> f64;
    fn is_zero(self) -> bool {
        self == Self::zero()
    }
}

impl Scalar for f64 {
    fn one() -> Self {
        1.0
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn conj(self) -> Self {
        self
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
}

/// Sparse square matrix acting on a spin, photon or spin ⊗ photon space.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinPhotonOperator<T: Scalar = f64> {
    dim: usize,
    entries: Vec<(usize, usize, T)>,
    hermitian: bool,
}

impl<T: Scalar> SpinPhotonOperator<T> {
    /// Assembles from unordered triplets. Duplicates are summed and exact
    /// zeros dropped; the Hermitian flag is determined exactly.
    pub fn from_triplets<I>(dim: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, T)>,
    {
        let mut acc: HashMap<(usize, usize), T> = HashMap::new();
        for (r, c, v) in triplets {
            if r >= dim || c >= dim {
                return Err(Error::InvalidParameter(format!(
                    "entry ({r}, {c}) outside dimension {dim}"
                )));
            }
            *acc.entry((r, c)).or_default() += v;
        }
        let mut entries: Vec<(usize, usize, T)> = acc
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|((r, c), v)| (r, c, v))
            .collect();
        entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
        Ok(Self::from_sorted(dim, entries))
    }

    fn from_sorted(dim: usize, entries: Vec<(usize, usize, T)>) -> Self {
        let mut op = Self {
            dim,
            entries,
            hermitian: false,
        };
        op.hermitian = op.check_hermitian();
        op
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_sorted(dim, Vec::new())
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal((0..dim).map(|_| T::one()))
    }

    pub fn diagonal<I: IntoIterator<Item = T>>(values: I) -> Self {
        let values: Vec<T> = values.into_iter().collect();
        let dim = values.len();
        let entries = values
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i, i, v))
            .collect();
        Self::from_sorted(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, T)] {
        &self.entries
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.entries
            .binary_search_by_key(&(row, col), |&(r, c, _)| (r, c))
            .map(|i| self.entries[i].2)
            .unwrap_or_else(|_| T::zero())
    }

    fn check_hermitian(&self) -> bool {
        self.entries
            .iter()
            .all(|&(r, c, v)| self.get(c, r) == v.conj())
    }

    /// Largest bandwidth `max |row - col|` over stored entries.
    pub fn bandwidth(&self) -> usize {
        self.entries
            .iter()
            .map(|&(r, c, _)| r.abs_diff(c))
            .max()
            .unwrap_or(0)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(_, _, v)| v.modulus())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, factor: T) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|&(r, c, v)| (r, c, v * factor))
            .filter(|&(_, _, v)| !v.is_zero())
            .collect();
        Self::from_sorted(self.dim, entries)
    }

    pub fn adjoint(&self) -> Self {
        let mut entries: Vec<_> = self
            .entries
            .iter()
            .map(|&(r, c, v)| (c, r, v.conj()))
            .collect();
        entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
        Self::from_sorted(self.dim, entries)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim)?;
        Self::from_triplets(
            self.dim,
            self.entries.iter().chain(other.entries.iter()).copied(),
        )
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim)?;
        Self::from_triplets(
            self.dim,
            self.entries
                .iter()
                .copied()
                .chain(other.entries.iter().map(|&(r, c, v)| (r, c, -v))),
        )
    }

    /// Sparse matrix product `self * other`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim)?;
        let rows = other.row_ranges();
        let mut triplets = Vec::new();
        for &(r, k, a) in &self.entries {
            for &(_, c, b) in &other.entries[rows[k].clone()] {
                triplets.push((r, c, a * b));
            }
        }
        Self::from_triplets(self.dim, triplets)
    }

    /// `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    /// Kronecker product `self ⊗ other`; index `i * other.dim + k`.
    pub fn kron(&self, other: &Self) -> Self {
        let d2 = other.dim;
        let mut entries = Vec::with_capacity(self.nnz() * other.nnz());
        // Traversing (i, k) row pairs in order emits rows i*d2+k ascending
        // and columns j*d2+l ascending within each row.
        let rows_a = self.row_ranges();
        let rows_b = other.row_ranges();
        for (i, ra) in rows_a.iter().enumerate() {
            for (k, rb) in rows_b.iter().enumerate() {
                for &(_, j, a) in &self.entries[ra.clone()] {
                    for &(_, l, b) in &other.entries[rb.clone()] {
                        entries.push((i * d2 + k, j * d2 + l, a * b));
                    }
                }
            }
        }
        Self::from_sorted(self.dim * d2, entries)
    }

    /// Restriction to the subspace spanned by the basis states `indices`,
    /// in the given order.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        let mut position = vec![usize::MAX; self.dim];
        for (new, &old) in indices.iter().enumerate() {
            if old >= self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: old + 1,
                });
            }
            position[old] = new;
        }
        let mut entries: Vec<_> = self
            .entries
            .iter()
            .filter_map(|&(r, c, v)| {
                let (nr, nc) = (position[r], position[c]);
                (nr != usize::MAX && nc != usize::MAX).then_some((nr, nc, v))
            })
            .collect();
        entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
        Ok(Self::from_sorted(indices.len(), entries))
    }

    pub fn matvec(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_dim(x.len())?;
        let mut y = vec![T::zero(); self.dim];
        self.matvec_into(x, &mut y);
        Ok(y)
    }

    /// `y = A x` without dimension checks; `y` is overwritten.
    pub(crate) fn matvec_into(&self, x: &[T], y: &mut [T]) {
        y.iter_mut().for_each(|v| *v = T::zero());
        for &(r, c, v) in &self.entries {
            y[r] += v * x[c];
        }
    }

    /// `<x|A|x>` for a state vector `x`.
    pub fn expectation(&self, x: &[T]) -> Result<T> {
        let ax = self.matvec(x)?;
        Ok(x.iter()
            .zip(&ax)
            .fold(T::zero(), |acc, (&xi, &yi)| acc + xi.conj() * yi))
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut m = vec![vec![T::zero(); self.dim]; self.dim];
        for &(r, c, v) in &self.entries {
            m[r][c] = v;
        }
        m
    }

    fn row_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut ranges = vec![0..0; self.dim];
        let mut start = 0;
        while start < self.entries.len() {
            let row = self.entries[start].0;
            let mut end = start;
            while end < self.entries.len() && self.entries[end].0 == row {
                end += 1;
            }
            ranges[row] = start..end;
            start = end;
        }
        ranges
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found,
            });
        }
        Ok(())
    }
}

impl SpinPhotonOperator<f64> {
    pub fn to_complex(&self) -> SpinPhotonOperator<Complex64> {
        SpinPhotonOperator::from_sorted(
            self.dim,
            self.entries
                .iter()
                .map(|&(r, c, v)| (r, c, Complex64::new(v, 0.0)))
                .collect(),
        )
    }

    /// Gershgorin bound on the spectral radius.
    pub fn gershgorin_radius(&self) -> f64 {
        let mut rows = vec![0.0; self.dim];
        for &(r, _, v) in &self.entries {
            rows[r] += v.abs();
        }
        rows.into_iter().fold(0.0, f64::max)
    }
}

impl SpinPhotonOperator<Complex64> {
    /// Real part, provided every imaginary part is exactly zero.
    pub fn try_into_real(&self) -> Result<SpinPhotonOperator<f64>> {
        if let Some(&(r, c, v)) = self.entries.iter().find(|(_, _, v)| v.im != 0.0) {
            return Err(Error::InvalidParameter(format!(
                "entry ({r}, {c}) = {v} is not real"
            )));
        }
        Ok(SpinPhotonOperator::from_sorted(
            self.dim,
            self.entries.iter().map(|&(r, c, v)| (r, c, v.re)).collect(),
        ))
    }
}
