//! Closed-form effective theory of both phases.
//!
//! The normal phase (`g < g_c`) follows from a squeezed Holstein–Primakoff
//! vacuum; the super-radiant phase (`g_c < g < g_collapse`) from a displaced
//! one with displacement `±β`. Every radicand and logarithm argument is
//! checked and reported by the condition it violates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoints {
    pub g_c: f64,
    pub g_collapse: f64,
}

impl CriticalPoints {
    /// The transition is reachable before the collapse iff `omega1 < omega`.
    pub fn transition_precedes_collapse(&self) -> bool {
        self.g_c < self.g_collapse
    }
}

pub fn critical_couplings(omega: f64, omega1: f64) -> Result<CriticalPoints> {
    if !(omega > 0.0 && omega1 > 0.0 && omega.is_finite() && omega1.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "omega and omega1 must be positive, got {omega} and {omega1}"
        )));
    }
    Ok(CriticalPoints {
        g_c: 0.5 * (omega * omega1).sqrt(),
        g_collapse: 0.5 * omega,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalPhaseResult {
    pub epsilon1: f64,
    pub eg1: f64,
    pub zeta: f64,
}

/// Normal-phase excitation energy, ground energy and squeezing, `g < g_c`.
pub fn normal_phase(params: &ModelParams) -> Result<NormalPhaseResult> {
    normal_phase_raw(params.omega(), params.omega1(), params.g(), params.n())
}

fn normal_phase_raw(omega: f64, omega1: f64, g: f64, n: f64) -> Result<NormalPhaseResult> {
    let g_c = 0.5 * (omega * omega1).sqrt();
    let g2 = g * g;
    let gc2 = g_c * g_c;
    let radicand = 1.0 - g2 / gc2;
    if !(radicand > 0.0) {
        return Err(Error::domain(
            "g < g_c",
            format!("normal-phase excitation energy is imaginary for g = {g} >= g_c = {g_c}"),
        ));
    }
    let root = radicand.sqrt();
    let epsilon1 = omega1 * root / n;
    // 4 g² / (N ω Δ) = g² / g_c²
    let zeta = -radicand.ln() / 4.0;
    let eg1 = -0.5 * omega1 + omega1 / (2.0 * n) * (root - 1.0)
        - g2 / (n * n) * (omega1 / (2.0 * omega * omega) + g2 * gc2 / (omega.powi(3) * (gc2 - g2)));
    Ok(NormalPhaseResult {
        epsilon1,
        eg1,
        zeta,
    })
}

/// Whether the `λ₃/N` correction inside the super-radiant radical is kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RadicalForm {
    /// `2 sqrt(ω² - λ_β²) + λ₃/N`, as written.
    Verbatim,
    /// `2 sqrt(ω² - λ_β²)`, the thermodynamic-limit denominator.
    DropInverseN,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperradiantConstants {
    pub beta: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta0: f64,
    pub lambda_beta: f64,
    pub r: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub r1: f64,
    /// `sqrt(ω² - λ_β²)`, the squeezed field frequency.
    pub field_frequency: f64,
    /// `±β` give identical effective Hamiltonians; only `+β` is stored.
    pub twofold_degenerate: bool,
    pub form: RadicalForm,
}

fn check_superradiant_window(omega: f64, omega1: f64, g: f64) -> Result<()> {
    let g_c = 0.5 * (omega * omega1).sqrt();
    if omega1 >= omega {
        return Err(Error::domain(
            "omega1 < omega",
            format!("g_c = {g_c} is not below g_collapse = {}", 0.5 * omega),
        ));
    }
    if g.abs() >= 0.5 * omega {
        return Err(Error::domain(
            "g < g_collapse",
            format!(
                "1 - 4g²/ω² must be positive; g = {g}, g_collapse = {}",
                0.5 * omega
            ),
        ));
    }
    if g.abs() <= g_c {
        return Err(Error::domain(
            "g > g_c",
            format!("displacement radicand is negative for g = {g} <= g_c = {g_c}"),
        ));
    }
    Ok(())
}

/// Displacement `β` of the super-radiant phase.
pub fn displacement_beta(params: &ModelParams) -> Result<f64> {
    beta_raw(params.omega(), params.omega1(), params.g())
}

fn beta_raw(omega: f64, omega1: f64, g: f64) -> Result<f64> {
    check_superradiant_window(omega, omega1, g)?;
    let g2 = g * g;
    let collapse = 1.0 - 4.0 * g2 / (omega * omega);
    let critical = 16.0 * g2 * g2 / (omega * omega1).powi(2) - 4.0 * g2 / (omega * omega);
    let ratio = collapse / critical;
    if !(ratio >= 0.0) {
        return Err(Error::domain(
            "g > g_c",
            format!("inner ratio {ratio} of the displacement is negative"),
        ));
    }
    let outer = 1.0 - ratio.sqrt();
    if !(outer >= 0.0) {
        return Err(Error::domain(
            "g > g_c",
            format!("outer radicand 1 - sqrt({ratio}) of the displacement is negative"),
        ));
    }
    Ok(outer.sqrt() / std::f64::consts::SQRT_2)
}

/// All super-radiant constants, evaluated in dependency order.
pub fn superradiant_constants(
    params: &ModelParams,
    form: RadicalForm,
) -> Result<SuperradiantConstants> {
    constants_raw(
        params.omega(),
        params.omega1(),
        params.g(),
        params.n(),
        form,
    )
}

fn constants_raw(
    omega: f64,
    omega1: f64,
    g: f64,
    n: f64,
    form: RadicalForm,
) -> Result<SuperradiantConstants> {
    let beta = beta_raw(omega, omega1, g)?;
    let b2 = beta * beta;
    let beta1 = (1.0 - b2).sqrt();
    let beta2 = 1.0 - b2 / (1.0 - b2);
    let beta0 = omega1 * b2 - 0.5 * (omega1 + omega);
    let lambda_beta = 4.0 * g * beta * beta1;
    if !(lambda_beta.abs() < omega) {
        return Err(Error::domain(
            "lambda_beta < omega",
            format!("squeezed field frequency is imaginary: lambda_beta = {lambda_beta}"),
        ));
    }
    let r = 0.25 * ((omega - lambda_beta) / (omega + lambda_beta)).ln();
    let (c2r, s2r) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    let lambda1 = 2.0 * g * beta1 * beta2 * c2r;
    let lambda2 = g * beta * c2r / beta1;
    let lambda3 = 2.0 * g * beta * s2r / beta1;
    let field_frequency = (omega * omega - lambda_beta * lambda_beta).sqrt();
    let u = radical_ratio(omega1, lambda1, lambda3, field_frequency, n, form);
    if !(u < 1.0) {
        return Err(Error::domain(
            "r1 logarithm argument > 0",
            format!("1 - {u} is not positive"),
        ));
    }
    let r1 = -0.25 * (1.0 - u).ln();
    Ok(SuperradiantConstants {
        beta,
        beta1,
        beta2,
        beta0,
        lambda_beta,
        r,
        lambda1,
        lambda2,
        lambda3,
        r1,
        field_frequency,
        twofold_degenerate: true,
        form,
    })
}

/// `[2λ₁²/(2 sqrt(ω²-λ_β²) + λ₃/N) + λ₃] / (ω₁ - λ₃/2)`
fn radical_ratio(
    omega1: f64,
    lambda1: f64,
    lambda3: f64,
    field: f64,
    n: f64,
    form: RadicalForm,
) -> f64 {
    let denominator = match form {
        RadicalForm::Verbatim => 2.0 * field + lambda3 / n,
        RadicalForm::DropInverseN => 2.0 * field,
    };
    (2.0 * lambda1 * lambda1 / denominator + lambda3) / (omega1 - 0.5 * lambda3)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperradiantResult {
    pub epsilon2: f64,
    pub eg2: f64,
    /// Same quantities with `λ₃/N` dropped inside the radical.
    pub epsilon2_dropped: f64,
    pub eg2_dropped: f64,
}

impl SuperradiantResult {
    pub fn select(&self, form: RadicalForm) -> (f64, f64) {
        match form {
            RadicalForm::Verbatim => (self.epsilon2, self.eg2),
            RadicalForm::DropInverseN => (self.epsilon2_dropped, self.eg2_dropped),
        }
    }
}

/// Super-radiant excitation and ground energies, both radical forms.
pub fn superradiant_phase(params: &ModelParams) -> Result<SuperradiantResult> {
    superradiant_raw(params.omega(), params.omega1(), params.g(), params.n())
}

fn superradiant_raw(omega: f64, omega1: f64, g: f64, n: f64) -> Result<SuperradiantResult> {
    let evaluate = |form| -> Result<(f64, f64)> {
        let c = constants_raw(omega, omega1, g, n, form)?;
        let u = radical_ratio(omega1, c.lambda1, c.lambda3, c.field_frequency, n, form);
        let radicand = 1.0 - u;
        if !(radicand >= 0.0) {
            return Err(Error::domain(
                "excitation radicand >= 0",
                format!("super-radiant excitation radicand {radicand} is negative"),
            ));
        }
        let epsilon2 = (2.0 * omega1 - c.lambda3) / (2.0 * n) * radicand.sqrt();
        let eg2 =
            0.5 * epsilon2 - (omega1 - c.lambda3) / (2.0 * n) + 0.5 * c.field_frequency + c.beta0;
        Ok((epsilon2, eg2))
    };
    let (epsilon2, eg2) = evaluate(RadicalForm::Verbatim)?;
    let (epsilon2_dropped, eg2_dropped) = evaluate(RadicalForm::DropInverseN)?;
    Ok(SuperradiantResult {
        epsilon2,
        eg2,
        epsilon2_dropped,
        eg2_dropped,
    })
}

/// Thermodynamic-limit pseudospin `⟨J_z⟩/N`.
pub fn jz_thermo(params: &ModelParams) -> Result<f64> {
    if params.g() >= params.g_collapse() {
        return Err(Error::domain(
            "g < g_collapse",
            format!(
                "g = {} is beyond g_collapse = {}",
                params.g(),
                params.g_collapse()
            ),
        ));
    }
    if params.g() <= params.g_c() {
        return Ok(-0.5);
    }
    let beta = displacement_beta(params)?;
    Ok(beta * beta - 0.5)
}

/// Leading behaviour `(ω₁/N) sqrt(2/g_c) sqrt(g_c - g)` of the normal-phase
/// gap just below `g_c`.
pub fn gap_asymptote(params: &ModelParams) -> Result<f64> {
    let g_c = params.g_c();
    if params.g() > g_c {
        return Err(Error::domain(
            "g <= g_c",
            format!(
                "gap asymptote is the normal-phase side; g = {} > g_c = {g_c}",
                params.g()
            ),
        ));
    }
    Ok(params.omega1() / params.n() * (2.0 / g_c).sqrt() * (g_c - params.g()).sqrt())
}

/// Effective-theory prediction for whichever phase `g` lies in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PhaseResult {
    Normal(NormalPhaseResult),
    Superradiant(SuperradiantResult),
}

impl PhaseResult {
    pub fn ground_energy(&self) -> f64 {
        match self {
            PhaseResult::Normal(r) => r.eg1,
            PhaseResult::Superradiant(r) => r.eg2,
        }
    }

    pub fn excitation_energy(&self) -> f64 {
        match self {
            PhaseResult::Normal(r) => r.epsilon1,
            PhaseResult::Superradiant(r) => r.epsilon2,
        }
    }
}

/// Normal phase below `g_c`, super-radiant above. Exactly at `g_c` neither
/// expansion applies and a domain error is returned.
pub fn phase_result(params: &ModelParams) -> Result<PhaseResult> {
    if params.g() < params.g_c() {
        normal_phase(params).map(PhaseResult::Normal)
    } else {
        superradiant_phase(params).map(PhaseResult::Superradiant)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(g: f64, n: usize) -> ModelParams {
        ModelParams::new(1.0, 0.5, g, n).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn critical_points() {
        let c = critical_couplings(1.0, 0.5).unwrap();
        assert!(close(c.g_c, 0.353553390593, 1e-12));
        assert_eq!(c.g_collapse, 0.5);
        assert!(c.transition_precedes_collapse());
        assert!(close(
            critical_couplings(1.0, 0.1).unwrap().g_c,
            0.158113883008,
            1e-12
        ));
        let merged = critical_couplings(1.0, 1.0).unwrap();
        assert_eq!(merged.g_c, merged.g_collapse);
        assert!(!merged.transition_precedes_collapse());
        assert!(critical_couplings(0.0, 1.0).is_err());
    }

    #[test]
    fn normal_phase_values() {
        let r = normal_phase(&params(0.0, 100)).unwrap();
        assert_eq!(r.epsilon1, 0.005);
        assert_eq!(r.eg1, -0.25);
        assert_eq!(r.zeta, 0.0);
        let r = normal_phase(&params(0.25, 100)).unwrap();
        assert!(close(r.epsilon1, 0.005 * 0.5f64.sqrt(), 1e-15));
        assert!(close(r.zeta, -0.5f64.ln() / 4.0, 1e-15));
        let err = normal_phase(&params(0.36, 100)).unwrap_err();
        assert!(err.to_string().contains("g < g_c"));
    }

    #[test]
    fn displacement_values_and_limits() {
        assert!(close(
            displacement_beta(&params(0.4, 100)).unwrap(),
            0.446945,
            1e-6
        ));
        let g_c = params(0.0, 1).g_c();
        assert!(displacement_beta(&params(g_c + 1e-9, 10)).unwrap() < 1e-3);
        let near_collapse = displacement_beta(&params(0.5 - 1e-12, 10)).unwrap();
        assert!(close(near_collapse, 0.5f64.sqrt(), 1e-5));
        let below = displacement_beta(&params(0.3, 10)).unwrap_err();
        assert!(below.to_string().contains("g > g_c"));
        let beyond = displacement_beta(&params(0.5, 10)).unwrap_err();
        assert!(beyond.to_string().contains("g < g_collapse"));
        let inverted = ModelParams::new(1.0, 1.5, 0.45, 10).unwrap();
        assert!(displacement_beta(&inverted)
            .unwrap_err()
            .to_string()
            .contains("omega1 < omega"));
    }

    #[test]
    fn constants_chain() {
        let c = superradiant_constants(&params(0.4, 100), RadicalForm::Verbatim).unwrap();
        assert!(close(c.lambda_beta, 0.639711, 1e-6));
        assert!(close(c.r, -0.378843, 1e-6));
        assert!(close(c.lambda1, 0.698666, 1e-6));
        assert!(close(c.lambda2, 0.260013, 1e-6));
        assert!(close(c.lambda3, -0.332666, 1e-6));
        assert!(c.twofold_degenerate);
        // displacement condition: ω₁β - g β₁ β₂ λ_β / sqrt(ω² - λ_β²) = 0
        let lhs = 0.5 * c.beta - 0.4 * c.beta1 * c.beta2 * c.lambda_beta / c.field_frequency;
        assert!(lhs.abs() <= 1e-10);
        // V_linear coefficient ω₁β + 4gβ₁β₂ sinh(2r)/4 vanishes in ⟨K₀⟩ = 1/4
        let linear = 0.5 * c.beta + 0.4 * c.beta1 * c.beta2 * (2.0 * c.r).sinh();
        assert!(linear.abs() <= 1e-10);
    }

    #[test]
    fn constants_vanish_at_threshold() {
        let g_c = params(0.0, 1).g_c();
        let c = superradiant_constants(&params(g_c * (1.0 + 1e-10), 100), RadicalForm::Verbatim)
            .unwrap();
        for x in [c.lambda_beta, c.r, c.lambda2, c.lambda3] {
            assert!(x.abs() < 1e-4, "{x}");
        }
    }

    #[test]
    fn superradiant_values() {
        let r = superradiant_phase(&params(0.4, 100)).unwrap();
        assert!(close(r.epsilon2, 0.00491499, 1e-8));
        assert!(close(r.eg2, -0.2675184, 1e-7));
        assert!(r.epsilon2_dropped != r.epsilon2);
        assert!(close(r.epsilon2_dropped, r.epsilon2, 1e-5));
        assert_eq!(r.select(RadicalForm::DropInverseN).0, r.epsilon2_dropped);
        // ε₂ = (ω₁ - λ₃/2) e^{-2 r₁} / N
        let c = superradiant_constants(&params(0.4, 100), RadicalForm::Verbatim).unwrap();
        let via_r1 = (0.5 - 0.5 * c.lambda3) * (-2.0 * c.r1).exp() / 100.0;
        assert!(close(via_r1, r.epsilon2, 1e-15));
    }

    #[test]
    fn energies_continuous_at_threshold() {
        let g_c = params(0.0, 1).g_c();
        let above = superradiant_phase(&params(g_c + 1e-6, 100)).unwrap();
        assert!(above.epsilon2 < 1e-4);
        // the regular part of E_g^(1) meets E_g^(2); the last 1/N² term of
        // E_g^(1) carries a pole at g_c and is excluded here
        let g = g_c - 1e-6;
        let regular = -0.25 + 0.5 / 200.0 * ((1.0 - g * g / (g_c * g_c)).sqrt() - 1.0)
            - g * g / 1e4 * (0.5 / 2.0);
        assert!((regular - above.eg2).abs() <= 1e-4 * 0.5);
        let pole = normal_phase(&params(g, 100)).unwrap().eg1;
        assert!((pole - regular).abs() > 0.1);
    }

    #[test]
    fn pseudospin_limit() {
        assert_eq!(jz_thermo(&params(0.2, 10)).unwrap(), -0.5);
        assert_eq!(jz_thermo(&params(params(0.0, 1).g_c(), 10)).unwrap(), -0.5);
        assert!(close(jz_thermo(&params(0.4, 10)).unwrap(), -0.3002, 1e-4));
        assert!(jz_thermo(&params(0.5 - 1e-13, 10)).unwrap().abs() < 1e-5);
        assert!(jz_thermo(&params(0.5, 10)).is_err());
    }

    fn slope(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
        let xs: Vec<f64> = (0..=20)
            .map(|i| lo * (hi / lo).powf(i as f64 / 20.0))
            .collect();
        let pts: Vec<(f64, f64)> = xs.iter().map(|&x| (x.ln(), f(x).ln())).collect();
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    }

    #[test]
    fn gap_vanishes_as_square_root() {
        let g_c = params(0.0, 1).g_c();
        let eps1 = |d: f64| normal_phase(&params(g_c - d, 100)).unwrap().epsilon1;
        assert!(close(slope(eps1, 1e-6 * g_c, 1e-4 * g_c), 0.5, 1e-3));
        let eps2 = |d: f64| superradiant_phase(&params(g_c + d, 100)).unwrap().epsilon2;
        assert!(close(slope(eps2, 1e-6 * g_c, 1e-4 * g_c), 0.5, 1e-2));
        let d = 1e-9 * g_c;
        let ratio = eps1(d) / gap_asymptote(&params(g_c - d, 100)).unwrap();
        assert!(close(ratio, 1.0, 1e-6));
        assert!(gap_asymptote(&params(0.4, 100)).is_err());
    }

    #[test]
    fn excitation_energies_monotone_towards_threshold() {
        let g_c = params(0.0, 1).g_c();
        let below: Vec<f64> = (1..50)
            .map(|i| {
                normal_phase(&params(g_c * i as f64 / 50.0, 100))
                    .unwrap()
                    .epsilon1
            })
            .collect();
        assert!(below.windows(2).all(|w| w[1] < w[0]));
        let above: Vec<f64> = (1..50)
            .map(|i| {
                let g = g_c + (0.5 * 0.999 - g_c) * i as f64 / 50.0;
                superradiant_phase(&params(g, 100)).unwrap().epsilon2
            })
            .collect();
        assert!(above.iter().all(|e| e.is_finite() && *e > 0.0));
        assert!(above[..10].windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn weak_atom_frequency_lies_below_normal_continuation() {
        // ω₁ = 0.1: super-radiant ε₂ stays finite and positive up to collapse
        for i in 1..40 {
            let g_c = 0.5 * 0.1f64.sqrt();
            let g = g_c + (0.5 - g_c) * i as f64 / 40.0;
            let r = superradiant_raw(1.0, 0.1, g, 100.0).unwrap();
            assert!(r.epsilon2.is_finite() && r.epsilon2 > 0.0);
        }
    }

    #[test]
    fn depends_on_g_only_through_g_squared() {
        for g in [0.1, 0.3] {
            assert_eq!(
                normal_phase_raw(1.0, 0.5, g, 50.0).unwrap(),
                normal_phase_raw(1.0, 0.5, -g, 50.0).unwrap()
            );
        }
        for g in [0.38, 0.45] {
            let a = superradiant_raw(1.0, 0.5, g, 50.0).unwrap();
            let b = superradiant_raw(1.0, 0.5, -g, 50.0).unwrap();
            assert!(close(a.epsilon2, b.epsilon2, 1e-15));
            assert!(close(a.eg2, b.eg2, 1e-15));
        }
    }

    #[test]
    fn phase_dispatch() {
        assert!(matches!(
            phase_result(&params(0.2, 10)).unwrap(),
            PhaseResult::Normal(_)
        ));
        assert!(matches!(
            phase_result(&params(0.4, 10)).unwrap(),
            PhaseResult::Superradiant(_)
        ));
        let g_c = params(0.0, 1).g_c();
        assert!(phase_result(&params(g_c, 10)).is_err());
    }
}
