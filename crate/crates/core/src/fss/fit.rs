//! Least-squares fits for finite-size exponents and N → ∞ limits.

use log::warn;
use serde::{Deserialize, Serialize};

use super::scaling::{fit_residual, Quantity};
use crate::error::{Error, Result};
use crate::params::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub intercept_stderr: f64,
    pub points: usize,
}

/// Ordinary least squares `y = intercept + slope * x`; needs 3 points.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch {
            expected: xs.len(),
            found: ys.len(),
        });
    }
    let n = xs.len();
    if n < 3 {
        return Err(Error::InsufficientData(format!(
            "{n} points, a fit needs at least 3"
        )));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("abscissae are all equal".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let sigma2 = rss / (nf - 2.0);
    Ok(LinearFit {
        slope,
        intercept,
        slope_stderr: (sigma2 / sxx).sqrt(),
        intercept_stderr: (sigma2 * (1.0 / nf + mx * mx / sxx)).sqrt(),
        points: n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    /// Exponent `p` of `y ~ A x^p`.
    pub slope: f64,
    pub stderr: f64,
    pub prefactor: f64,
    pub points_used: usize,
    pub points_dropped: usize,
}

/// Fits `log y` against `log x`, dropping non-positive `y` with a warning.
pub fn power_law_fit(xs: &[f64], ys: &[f64]) -> Result<PowerLawFit> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch {
            expected: xs.len(),
            found: ys.len(),
        });
    }
    let mut lx = Vec::new();
    let mut ly = Vec::new();
    for (&x, &y) in xs.iter().zip(ys) {
        if x > 0.0 && y > 0.0 && y.is_finite() {
            lx.push(x.ln());
            ly.push(y.ln());
        } else {
            warn!("power-law fit: dropping point ({x}, {y})");
        }
    }
    let fit = linear_fit(&lx, &ly)?;
    Ok(PowerLawFit {
        slope: fit.slope,
        stderr: fit.slope_stderr,
        prefactor: fit.intercept.exp(),
        points_used: lx.len(),
        points_dropped: xs.len() - lx.len(),
    })
}

fn require_critical(params: &ModelParams) -> Result<()> {
    let g_c = params.g_c();
    if (params.g() - g_c).abs() > 1e-12 * g_c {
        return Err(Error::domain(
            "g = g_c",
            format!(
                "exponent fits are taken at g_c = {g_c}, got g = {}",
                params.g()
            ),
        ));
    }
    Ok(())
}

/// Finite-size exponent of `quantity` at `g_c` from `(N, observable)`
/// samples, e.g. exact-diagonalisation results.
pub fn fit_exponent(
    quantity: Quantity,
    params_at_gc: &ModelParams,
    samples: &[(usize, f64)],
) -> Result<PowerLawFit> {
    require_critical(params_at_gc)?;
    let mut ns = Vec::with_capacity(samples.len());
    let mut raw = Vec::with_capacity(samples.len());
    for &(n, value) in samples {
        let p = params_at_gc.with_n_atoms(n)?;
        ns.push(n as f64);
        raw.push(fit_residual(quantity, value, &p).abs());
    }
    power_law_fit(&ns, &raw)
}

/// Extrapolates `values(N)` to `N → ∞` by a straight-line fit in `N^{-power}`.
pub fn extrapolate_limit(ns: &[usize], values: &[f64], power: f64) -> Result<LinearFit> {
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).powf(-power)).collect();
    linear_fit(&xs, values)
}
