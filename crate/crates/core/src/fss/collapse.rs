//! Data collapse of rescaled finite-N observables against `η`.

use std::str::FromStr;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::scaling::{scaling_variable, singular_part_with, EnergyRegular, Quantity};
use super::universal::{analytic_finite_size, universal_point, QuarticWellSpec};
use crate::error::{Error, Result};
use crate::exact_diag::{converge_cutoff_with, SolverOptions, DEFAULT_LEVELS};
use crate::params::{ModelParams, TruncationSpec};

/// Where finite-N observables come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CollapseSource {
    /// Exact diagonalisation with a converged photon cutoff.
    Ed,
    /// Universal functions of the quartic well.
    Analytic,
}

impl FromStr for CollapseSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ed" => Ok(CollapseSource::Ed),
            "analytic" => Ok(CollapseSource::Analytic),
            other => Err(Error::InvalidParameter(format!(
                "unknown source '{other}', expected ed or analytic"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollapseOptions {
    pub eta_window: (f64, f64),
    /// Points are computed this far outside the window so that curves can be
    /// interpolated up to its edges.
    pub eta_margin: f64,
    pub bins: usize,
    pub energy_regular: EnergyRegular,
    pub trunc: TruncationSpec,
    pub solver: SolverOptions,
}

impl Default for CollapseOptions {
    fn default() -> Self {
        Self {
            eta_window: (-2.0, 2.0),
            eta_margin: 0.25,
            bins: 201,
            energy_regular: EnergyRegular::Constant,
            trunc: TruncationSpec::default(),
            solver: SolverOptions::default(),
        }
    }
}

/// Observables at one `(N, g)` cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollapseSample {
    pub n_atoms: usize,
    pub g: f64,
    pub eta: f64,
    pub eg: f64,
    pub jz: f64,
    pub jy2: f64,
}

impl CollapseSample {
    pub fn value(&self, quantity: Quantity) -> f64 {
        match quantity {
            Quantity::Energy => self.eg,
            Quantity::Jz => self.jz,
            Quantity::Jy2 => self.jy2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollapseCurve {
    pub n_atoms: usize,
    pub quantity: Quantity,
    pub exponent_used: f64,
    /// `(η, N^{exponent} Q_sing)` with `η` strictly increasing.
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpreadReport {
    /// Largest across-N range at a common `η`, over the data range.
    pub spread: f64,
    pub worst_eta: f64,
    pub overlapping_bins: usize,
    pub data_range: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollapseResult {
    pub curves: Vec<CollapseCurve>,
    pub spread: SpreadReport,
}

/// Couplings with `g'²` uniform on `(0, 0.95 (g_collapse/g_c)²]`.
pub fn default_g_grid(omega: f64, omega1: f64, points: usize) -> Result<Vec<f64>> {
    let probe = ModelParams::new(omega, omega1, 0.0, 1)?;
    let (g_c, g_collapse) = (probe.g_c(), probe.g_collapse());
    if g_c <= 0.0 {
        return Err(Error::InvalidParameter(
            "omega1 must be positive for a scaling grid".into(),
        ));
    }
    let top = 0.95 * (g_collapse / g_c).powi(2);
    Ok((1..=points)
        .map(|i| g_c * (top * i as f64 / points as f64).sqrt())
        .collect())
}

fn validate_inputs(base: &ModelParams, n_list: &[usize], g_grid: &[f64]) -> Result<()> {
    let mut sizes = n_list.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "a collapse needs at least two distinct sizes, got {n_list:?}"
        )));
    }
    if let Some(g) = g_grid
        .iter()
        .find(|&&g| !(g > 0.0 && g < base.g_collapse()))
    {
        return Err(Error::InvalidParameter(format!(
            "g = {g} is outside (0, g_collapse = {})",
            base.g_collapse()
        )));
    }
    Ok(())
}

/// Observables for every size and every coupling whose `η` falls inside the
/// window plus margin. Cells that fail are logged and skipped.
pub fn collapse_samples(
    base: &ModelParams,
    n_list: &[usize],
    g_grid: &[f64],
    source: CollapseSource,
    opts: &CollapseOptions,
) -> Result<Vec<CollapseSample>> {
    validate_inputs(base, n_list, g_grid)?;
    let (lo, hi) = (
        opts.eta_window.0 - opts.eta_margin,
        opts.eta_window.1 + opts.eta_margin,
    );
    let spec = QuarticWellSpec::for_params(base)?;
    let mut cells = Vec::new();
    for &n in n_list {
        for &g in g_grid {
            let p = base.with_n_atoms(n)?.with_g(g)?;
            let eta = scaling_variable(&p);
            if (lo..=hi).contains(&eta) {
                cells.push((p, eta));
            }
        }
    }
    let samples: Vec<Option<CollapseSample>> = cells
        .par_iter()
        .map(|&(p, eta)| {
            let values = match source {
                CollapseSource::Ed => {
                    converge_cutoff_with(&p, &opts.trunc, DEFAULT_LEVELS, &opts.solver)
                        .map(|s| (s.ground_energy(), s.jz_per_atom, s.jy2_per_atom2))
                }
                CollapseSource::Analytic => universal_point(&spec, eta)
                    .and_then(|point| analytic_finite_size(&p, &point))
                    .map(|f| (f.eg, f.jz, f.jy2)),
            };
            match values {
                Ok((eg, jz, jy2)) => Some(CollapseSample {
                    n_atoms: p.n_atoms(),
                    g: p.g(),
                    eta,
                    eg,
                    jz,
                    jy2,
                }),
                Err(e) => {
                    if source == CollapseSource::Ed {
                        warn!(
                            "collapse cell N = {}, g = {} skipped: {e}",
                            p.n_atoms(),
                            p.g()
                        );
                    }
                    None
                }
            }
        })
        .collect();
    Ok(samples.into_iter().flatten().collect())
}

/// One rescaled curve per size, in the order sizes first appear.
pub fn curves_from_samples(
    base: &ModelParams,
    samples: &[CollapseSample],
    quantity: Quantity,
    variant: EnergyRegular,
) -> Result<Vec<CollapseCurve>> {
    let mut sizes: Vec<usize> = Vec::new();
    for s in samples {
        if !sizes.contains(&s.n_atoms) {
            sizes.push(s.n_atoms);
        }
    }
    sizes
        .into_iter()
        .map(|n| {
            let mut points = Vec::new();
            for s in samples.iter().filter(|s| s.n_atoms == n) {
                let p = base.with_n_atoms(n)?.with_g(s.g)?;
                points.push((
                    s.eta,
                    singular_part_with(quantity, s.value(quantity), &p, variant),
                ));
            }
            points.sort_by(|a, b| a.0.total_cmp(&b.0));
            points.dedup_by(|a, b| a.0 == b.0);
            Ok(CollapseCurve {
                n_atoms: n,
                quantity,
                exponent_used: quantity.exponent(),
                points,
            })
        })
        .collect()
}

fn interpolate(points: &[(f64, f64)], x: f64) -> Option<f64> {
    let (first, last) = (points.first()?, points.last()?);
    if x < first.0 || x > last.0 {
        return None;
    }
    let i = points.partition_point(|p| p.0 < x);
    if i == 0 {
        return Some(first.1);
    }
    let (a, b) = (points[i - 1], points[i]);
    Some(a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0))
}

/// Largest range across curves at a common `η` (linear interpolation on a
/// fixed bin grid over the window), divided by the range of all data points
/// inside the window. Only bins covered by at least two curves count.
pub fn collapse_spread(
    curves: &[CollapseCurve],
    window: (f64, f64),
    bins: usize,
) -> Result<SpreadReport> {
    if bins < 2 || !(window.0 < window.1) {
        return Err(Error::InvalidParameter(format!(
            "need at least two bins over a non-empty window, got {bins} over {window:?}"
        )));
    }
    let mut worst = (0.0f64, f64::NAN);
    let mut overlapping = 0;
    for b in 0..bins {
        let x = window.0 + (window.1 - window.0) * b as f64 / (bins - 1) as f64;
        let values: Vec<f64> = curves
            .iter()
            .filter_map(|c| interpolate(&c.points, x))
            .collect();
        if values.len() < 2 {
            continue;
        }
        overlapping += 1;
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        if hi - lo > worst.0 || worst.1.is_nan() {
            worst = (hi - lo, x);
        }
    }
    if overlapping < 2 {
        return Err(Error::InsufficientData(format!(
            "only {overlapping} eta bins are covered by two or more curves"
        )));
    }
    let inside = curves
        .iter()
        .flat_map(|c| c.points.iter())
        .filter(|p| p.0 >= window.0 && p.0 <= window.1)
        .map(|p| p.1);
    let (lo, hi) = inside.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    let data_range = hi - lo;
    if !(data_range > 0.0) {
        return Err(Error::InsufficientData(
            "rescaled data have zero range in the window".into(),
        ));
    }
    Ok(SpreadReport {
        spread: worst.0 / data_range,
        worst_eta: worst.1,
        overlapping_bins: overlapping,
        data_range,
    })
}

/// Rescaled curves for every size and their collapse spread.
pub fn build_collapse(
    base: &ModelParams,
    n_list: &[usize],
    g_grid: &[f64],
    quantity: Quantity,
    source: CollapseSource,
    opts: &CollapseOptions,
) -> Result<CollapseResult> {
    let samples = collapse_samples(base, n_list, g_grid, source, opts)?;
    let curves = curves_from_samples(base, &samples, quantity, opts.energy_regular)?;
    let spread = collapse_spread(&curves, opts.eta_window, opts.bins)?;
    Ok(CollapseResult { curves, spread })
}
