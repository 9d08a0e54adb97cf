//! Universal functions `E₀(η)`, `X(η) = ⟨x²⟩`, `P(η) = ⟨p²⟩` of the
//! rescaled well
//!
//! `[-½ d²/dx² + η x² - k x⁴] φ₀ = E₀(η) φ₀`.
//!
//! For `k > 0` the well is only metastable, so the lowest state is computed
//! inside hard walls placed before the barrier top, and each point carries a
//! certificate of how much amplitude reaches the walls.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::tridiag::lowest_eigenpair;
use crate::params::ModelParams;

use super::scaling::scaling_variable;

/// Hard-wall placement for a given `η`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BoxRule {
    /// Walls at `0.9` of the barrier position for `k > 0`, capped at twelve
    /// harmonic lengths; around the well minimum for `k <= 0`.
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuarticWellSpec {
    /// `k` in `-k x⁴`; positive is the metastable case.
    pub quartic_coeff: f64,
    pub box_rule: BoxRule,
    /// `η` used for the barrier position when `η` itself is smaller.
    pub eta_floor: f64,
    /// Interior points of the first grid.
    pub grid_points: usize,
    pub max_grid_points: usize,
    /// Relative energy change between grid doublings accepted as converged.
    pub grid_tol: f64,
    /// Largest admissible `max ψ²` near the walls relative to `max ψ²`.
    pub boundary_tol: f64,
}

impl QuarticWellSpec {
    pub const MIN_GRID_POINTS: usize = 500;

    pub fn new(quartic_coeff: f64) -> Result<Self> {
        let spec = Self {
            quartic_coeff,
            box_rule: BoxRule::Auto,
            eta_floor: 1.0,
            grid_points: Self::MIN_GRID_POINTS,
            max_grid_points: 1 << 17,
            grid_tol: 1e-6,
            boundary_tol: 1e-8,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// `k = ω₁⁴/(4ω)`, the quartic coefficient frozen at `g' = 1`.
    pub fn frozen(omega: f64, omega1: f64) -> Result<Self> {
        Self::new(omega1.powi(4) / (4.0 * omega))
    }

    pub fn for_params(params: &ModelParams) -> Result<Self> {
        Self::frozen(params.omega(), params.omega1())
    }

    /// `k = 0`: the harmonic oscillator of frequency `sqrt(2η)`.
    pub fn harmonic() -> Self {
        Self::new(0.0).expect("harmonic spec is valid")
    }

    pub fn validate(&self) -> Result<()> {
        if !self.quartic_coeff.is_finite() {
            return Err(Error::InvalidParameter(
                "quartic coefficient must be finite".into(),
            ));
        }
        if self.grid_points < Self::MIN_GRID_POINTS || self.max_grid_points < self.grid_points {
            return Err(Error::InvalidParameter(format!(
                "grid points must satisfy {} <= M <= max, got M = {}, max = {}",
                Self::MIN_GRID_POINTS,
                self.grid_points,
                self.max_grid_points
            )));
        }
        if let BoxRule::Fixed(l) = self.box_rule {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "box half-width must be positive, got {l}"
                )));
            }
        }
        if !(self.eta_floor > 0.0 && self.grid_tol > 0.0 && self.boundary_tol > 0.0) {
            return Err(Error::InvalidParameter(
                "eta_floor and tolerances must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Box half-width `L` for `η`, or `None` when no confining box exists
    /// (a flat or inverted harmonic well with `k = 0`).
    pub fn box_half_width(&self, eta: f64) -> Option<f64> {
        let k = self.quartic_coeff;
        match self.box_rule {
            BoxRule::Fixed(l) => Some(l),
            BoxRule::Auto if k > 0.0 => {
                let barrier = (eta.max(self.eta_floor) / (2.0 * k)).sqrt();
                let wall = 0.9 * barrier;
                Some(if eta > 0.0 {
                    wall.min(12.0 * (2.0 * eta).powf(-0.25))
                } else {
                    wall
                })
            }
            BoxRule::Auto if k == 0.0 => (eta > 0.0).then(|| 12.0 * (2.0 * eta).powf(-0.25)),
            BoxRule::Auto => {
                let q = -k;
                let x0 = if eta < 0.0 {
                    (-eta / (2.0 * q)).sqrt()
                } else {
                    0.0
                };
                let curvature = 2.0 * eta + 12.0 * q * x0 * x0;
                let local = if curvature > 0.0 {
                    curvature.powf(-0.25)
                } else {
                    f64::INFINITY
                };
                Some(x0 + 12.0 * local.min(q.powf(-1.0 / 6.0)))
            }
        }
    }
}

/// One sample of the universal functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub eta: f64,
    pub e0: f64,
    /// `⟨x²⟩`
    pub x2: f64,
    /// `⟨p²⟩`
    pub p2: f64,
    /// `⟨x⁴⟩`
    pub x4: f64,
    pub box_half_width: f64,
    /// Interior points of the finest grid.
    pub grid_points: usize,
    /// `max ψ²` over the outer 5% of the box relative to `max ψ²`.
    pub boundary_weight: f64,
    pub grid_converged: bool,
    pub resolved: bool,
}

impl ScalingPoint {
    fn unresolved(eta: f64) -> Self {
        Self {
            eta,
            e0: f64::NAN,
            x2: f64::NAN,
            p2: f64::NAN,
            x4: f64::NAN,
            box_half_width: f64::NAN,
            grid_points: 0,
            boundary_weight: f64::INFINITY,
            grid_converged: false,
            resolved: false,
        }
    }

    pub fn require_resolved(&self) -> Result<&Self> {
        if self.resolved {
            Ok(self)
        } else {
            Err(Error::Unresolved {
                eta: self.eta,
                boundary_weight: self.boundary_weight,
            })
        }
    }
}

struct GridState {
    e0: f64,
    x2: f64,
    p2: f64,
    x4: f64,
    boundary_weight: f64,
}

fn solve_grid(eta: f64, k: f64, half_width: f64, m: usize) -> GridState {
    let h = 2.0 * half_width / (m + 1) as f64;
    let xs: Vec<f64> = (0..m).map(|i| -half_width + (i + 1) as f64 * h).collect();
    let kinetic = 1.0 / (h * h);
    let diag: Vec<f64> = xs
        .iter()
        .map(|&x| kinetic + eta * x * x - k * x.powi(4))
        .collect();
    let off = vec![-0.5 * kinetic; m - 1];
    let (e0, v) = lowest_eigenpair(&diag, &off);
    // v has unit Euclidean norm; ψ = v / sqrt(h) has unit L² norm
    let x2 = xs.iter().zip(&v).map(|(x, c)| x * x * c * c).sum();
    let x4 = xs.iter().zip(&v).map(|(x, c)| x.powi(4) * c * c).sum();
    let mut p2 = v[0] * v[0] + v[m - 1] * v[m - 1];
    p2 += v.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum::<f64>();
    p2 /= h * h;
    let peak = v.iter().fold(0.0f64, |a, c| a.max(c * c));
    let edge = v
        .iter()
        .zip(&xs)
        .filter(|(_, x)| x.abs() >= 0.95 * half_width)
        .fold(0.0f64, |a, (c, _)| a.max(c * c));
    GridState {
        e0,
        x2,
        p2,
        x4,
        boundary_weight: edge / peak,
    }
}

/// Lowest state of the well at one `η`, converged by grid doubling and
/// Richardson-extrapolated in the grid spacing.
pub fn universal_point(spec: &QuarticWellSpec, eta: f64) -> Result<ScalingPoint> {
    spec.validate()?;
    if !eta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "eta must be finite, got {eta}"
        )));
    }
    let Some(half_width) = spec.box_half_width(eta) else {
        return Ok(ScalingPoint::unresolved(eta));
    };
    let k = spec.quartic_coeff;
    let mut m = spec.grid_points;
    let mut coarse = solve_grid(eta, k, half_width, m);
    let mut converged = false;
    let mut extrapolated = (coarse.e0, coarse.x2, coarse.p2, coarse.x4);
    let mut weight = coarse.boundary_weight;
    while 2 * m < spec.max_grid_points {
        m = 2 * m + 1;
        let next = solve_grid(eta, k, half_width, m);
        let change = (next.e0 - coarse.e0).abs();
        // second-order differences: the error falls by 4 when h halves
        let rich = |a: f64, b: f64| (4.0 * b - a) / 3.0;
        extrapolated = (
            rich(coarse.e0, next.e0),
            rich(coarse.x2, next.x2),
            rich(coarse.p2, next.p2),
            rich(coarse.x4, next.x4),
        );
        weight = next.boundary_weight;
        let scale = next.e0.abs().max(1.0);
        coarse = next;
        if change < spec.grid_tol * scale {
            converged = true;
            break;
        }
    }
    let (e0, x2, p2, x4) = extrapolated;
    Ok(ScalingPoint {
        eta,
        e0,
        x2,
        p2,
        x4,
        box_half_width: half_width,
        grid_points: m,
        boundary_weight: weight,
        grid_converged: converged,
        resolved: converged && weight <= spec.boundary_tol,
    })
}

/// Universal functions on an `η` grid; points are independent and are
/// evaluated concurrently, results keep the input order.
pub fn universal_functions(spec: &QuarticWellSpec, eta_grid: &[f64]) -> Result<Vec<ScalingPoint>> {
    eta_grid
        .par_iter()
        .map(|&eta| universal_point(spec, eta))
        .collect()
}

/// Finite-N observables predicted from the universal functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiniteSizePrediction {
    pub eg: f64,
    pub jz: f64,
    pub jy2: f64,
}

/// `E_g = -ω₁/2 - ω₁/(2N) + N^{-4/3} E₀(η)`,
/// `⟨J_z⟩/N = -1/2 + (ω₁/2) N^{-2/3} X(η) + N^{-4/3} P(η)/(2ω₁)`,
/// `⟨J_y²⟩/N² = N^{-4/3} P(η)/(2ω₁)`.
pub fn analytic_finite_size(
    params: &ModelParams,
    point: &ScalingPoint,
) -> Result<FiniteSizePrediction> {
    let eta = scaling_variable(params);
    if (point.eta - eta).abs() > 1e-9 * eta.abs().max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "scaling point has eta = {} but the parameters give eta = {eta}",
            point.eta
        )));
    }
    point.require_resolved()?;
    let (w1, n) = (params.omega1(), params.n());
    let n23 = n.powf(-2.0 / 3.0);
    let n43 = n.powf(-4.0 / 3.0);
    let jy2 = n43 * point.p2 / (2.0 * w1);
    Ok(FiniteSizePrediction {
        eg: -0.5 * w1 - w1 / (2.0 * n) + n43 * point.e0,
        jz: -0.5 + 0.5 * w1 * n23 * point.x2 + jy2,
        jy2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_limit() {
        let spec = QuarticWellSpec::harmonic();
        for eta in [0.5, 2.0, 50.0] {
            let p = universal_point(&spec, eta).unwrap();
            let w = (2.0 * eta).sqrt();
            assert!(p.resolved);
            assert!((p.e0 / (0.5 * w) - 1.0).abs() < 1e-6, "{eta}: {}", p.e0);
            assert!((p.x2 * 2.0 * w - 1.0).abs() < 1e-6);
            assert!((p.p2 / (0.5 * w) - 1.0).abs() < 1e-6);
        }
        assert!(!universal_point(&spec, 0.0).unwrap().resolved);
        assert!(!universal_point(&spec, -1.0).unwrap().resolved);
    }

    #[test]
    fn metastable_well_lies_below_harmonic() {
        let spec = QuarticWellSpec::frozen(1.0, 0.5).unwrap();
        assert_eq!(spec.quartic_coeff, 0.015625);
        let p = universal_point(&spec, 1.0).unwrap();
        assert!(p.resolved);
        let harmonic = 0.5 * 2f64.sqrt();
        assert!(p.e0 < harmonic);
        // first-order shift -k⟨x⁴⟩ with ⟨x⁴⟩ = 3/(4·2η) for the oscillator
        let first_order = harmonic - spec.quartic_coeff * 3.0 / 8.0;
        assert!((p.e0 - first_order).abs() < 1e-3);
    }

    #[test]
    fn virial_identity() {
        for spec in [
            QuarticWellSpec::frozen(1.0, 0.5).unwrap(),
            QuarticWellSpec::new(-0.2).unwrap(),
        ] {
            for eta in [-1.5, 0.0, 1.0, 3.0, 10.0] {
                let p = universal_point(&spec, eta).unwrap();
                if !p.resolved {
                    continue;
                }
                let rhs = 2.0 * eta * p.x2 - 4.0 * spec.quartic_coeff * p.x4;
                assert!((p.p2 - rhs).abs() <= 1e-5, "eta {eta}: {} vs {rhs}", p.p2);
            }
        }
    }

    #[test]
    fn critical_point_of_metastable_well_is_unresolved() {
        let spec = QuarticWellSpec::frozen(1.0, 0.5).unwrap();
        let p = universal_point(&spec, 0.0).unwrap();
        assert!(!p.resolved);
        assert!(matches!(
            p.require_resolved(),
            Err(Error::Unresolved { .. })
        ));
    }

    #[test]
    fn confining_quartic_resolves_critical_point() {
        let spec = QuarticWellSpec::new(-1.0).unwrap();
        let p = universal_point(&spec, 0.0).unwrap();
        assert!(p.resolved);
        // pure quartic oscillator ½p² + x⁴: E₀ = 0.667986259...
        assert!((p.e0 - 0.667986259155777).abs() < 1e-6);
    }

    #[test]
    fn analytic_prediction_requires_matching_eta() {
        let params = ModelParams::new(1.0, 0.5, 0.3, 100).unwrap();
        let spec = QuarticWellSpec::for_params(&params).unwrap();
        let eta = scaling_variable(&params);
        let point = universal_point(&spec, eta).unwrap();
        let pred = analytic_finite_size(&params, &point).unwrap();
        assert!(pred.eg < -0.25 && pred.jz > -0.5 && pred.jy2 > 0.0);
        let other = universal_point(&spec, eta + 0.1).unwrap();
        assert!(analytic_finite_size(&params, &other).is_err());
    }
}
