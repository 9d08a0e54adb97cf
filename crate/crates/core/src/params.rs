//! Physical parameters and Fock-space truncation settings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical parameter set of the two-photon Dicke Hamiltonian.
///
/// The scaled atomic frequency `omega1 = N * delta` is stored; `delta` is
/// derived from it so the two can never disagree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    omega: f64,
    omega1: f64,
    g: f64,
    n_atoms: usize,
}

impl ModelParams {
    pub fn new(omega: f64, omega1: f64, g: f64, n_atoms: usize) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "omega must be positive and finite, got {omega}"
            )));
        }
        if !(omega1.is_finite() && omega1 >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "omega1 must be non-negative and finite, got {omega1}"
            )));
        }
        if !(g.is_finite() && g >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "g must be non-negative and finite, got {g}"
            )));
        }
        if n_atoms < 1 {
            return Err(Error::InvalidParameter("n_atoms must be at least 1".into()));
        }
        Ok(Self {
            omega,
            omega1,
            g,
            n_atoms,
        })
    }

    /// Builds the parameter set from the bare atomic splitting `delta`.
    pub fn from_delta(omega: f64, delta: f64, g: f64, n_atoms: usize) -> Result<Self> {
        Self::new(omega, delta * n_atoms as f64, g, n_atoms)
    }

    pub fn with_g(&self, g: f64) -> Result<Self> {
        Self::new(self.omega, self.omega1, g, self.n_atoms)
    }

    /// Same `omega`, `omega1` and `g` at a different atom number.
    pub fn with_n_atoms(&self, n_atoms: usize) -> Result<Self> {
        Self::new(self.omega, self.omega1, self.g, n_atoms)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn omega1(&self) -> f64 {
        self.omega1
    }

    pub fn delta(&self) -> f64 {
        self.omega1 / self.n_atoms as f64
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    /// Atom number as a float, for formulas.
    pub fn n(&self) -> f64 {
        self.n_atoms as f64
    }

    /// Pseudospin length `j = N/2`.
    pub fn j(&self) -> f64 {
        0.5 * self.n()
    }

    /// Critical coupling `sqrt(omega * omega1) / 2`.
    pub fn g_c(&self) -> f64 {
        0.5 * (self.omega * self.omega1).sqrt()
    }

    /// Spectral collapse point `omega / 2`.
    pub fn g_collapse(&self) -> f64 {
        0.5 * self.omega
    }

    /// Dimensionless coupling `g / g_c`.
    pub fn g_prime(&self) -> f64 {
        self.g / self.g_c()
    }
}

/// Photon-number cutoff and its convergence controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationSpec {
    pub n_max: usize,
    /// Relative tolerance on the ground energy between successive cutoffs.
    pub rel_tol: f64,
    pub n_max_ceiling: usize,
    /// Largest spin-Fock dimension `(N+1)(n_max+1)` that may be assembled.
    pub max_dim: usize,
}

impl TruncationSpec {
    pub const DEFAULT_MAX_DIM: usize = 4_000_000;

    pub fn new(n_max: usize, rel_tol: f64, n_max_ceiling: usize) -> Result<Self> {
        let spec = Self {
            n_max,
            rel_tol,
            n_max_ceiling,
            max_dim: Self::DEFAULT_MAX_DIM,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// A fixed cutoff with no doubling.
    pub fn fixed(n_max: usize) -> Result<Self> {
        Self::new(n_max, 1e-10, n_max)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_max < 2 {
            return Err(Error::InvalidParameter(format!(
                "n_max must be at least 2, got {}",
                self.n_max
            )));
        }
        if !(self.rel_tol.is_finite() && self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if self.n_max > self.n_max_ceiling {
            return Err(Error::InvalidParameter(format!(
                "n_max {} exceeds ceiling {}",
                self.n_max, self.n_max_ceiling
            )));
        }
        Ok(())
    }
}

impl Default for TruncationSpec {
    fn default() -> Self {
        Self {
            n_max: 16,
            rel_tol: 1e-10,
            n_max_ceiling: 1024,
            max_dim: Self::DEFAULT_MAX_DIM,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities() {
        let p = ModelParams::new(1.0, 0.5, 0.25, 100).unwrap();
        assert_eq!(p.delta(), 0.005);
        assert!((p.g_c() - 0.125f64.sqrt()).abs() < 1e-15);
        assert!((p.g_prime() - 0.25 / 0.125f64.sqrt()).abs() < 1e-15);
        assert_eq!(p.j(), 50.0);
        assert_eq!(p.g_collapse(), 0.5);
    }

    #[test]
    fn from_delta_round_trips() {
        let p = ModelParams::from_delta(1.0, 0.1, 0.0, 4).unwrap();
        assert_eq!(p.omega1(), 0.4);
        assert_eq!(p.delta(), 0.1);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(ModelParams::new(0.0, 0.5, 0.1, 10).is_err());
        assert!(ModelParams::new(1.0, 0.5, -0.1, 10).is_err());
        assert!(ModelParams::new(1.0, 0.5, 0.1, 0).is_err());
        assert!(ModelParams::new(1.0, f64::NAN, 0.1, 3).is_err());
    }

    #[test]
    fn truncation_invariants() {
        assert!(TruncationSpec::new(1, 1e-8, 64).is_err());
        assert!(TruncationSpec::new(8, 0.0, 64).is_err());
        assert!(TruncationSpec::new(128, 1e-8, 64).is_err());
        assert!(TruncationSpec::new(8, 1e-8, 64).is_ok());
    }
}
