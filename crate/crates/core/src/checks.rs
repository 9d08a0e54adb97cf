//! Acceptance checks shared by the `verify` command and the test suite.
//!
//! Each check returns a [`CheckReport`]; a check passes only if its numbers
//! are within tolerance and it finished inside its runtime budget.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::effective::{
    critical_couplings, jz_thermo, normal_phase, phase_result, superradiant_phase,
};
use crate::error::{Error, Result};
use crate::exact_diag::{converge_cutoff, sweep, SolverOptions, SweepRow};
use crate::fss::{
    collapse_samples, collapse_spread, curves_from_samples, default_g_grid, extrapolate_limit,
    fit_exponent, power_law_fit, universal_functions, universal_point, CollapseOptions,
    CollapseSample, CollapseSource, Quantity, QuarticWellSpec,
};
use crate::linalg::{dense_lowest, krylov_lowest, KrylovOptions};
use crate::model::{assemble_hamiltonian, parity_operator};
use crate::params::{ModelParams, TruncationSpec};

const OMEGA: f64 = 1.0;
const OMEGA1: f64 = 0.5;
const SWEEP_N: usize = 100;
const SWEEP_POINTS: usize = 40;
const CRITICAL_SIZES: [usize; 4] = [20, 40, 80, 160];
const COLLAPSE_SIZES: [usize; 5] = [5, 10, 30, 50, 100];
const COLLAPSE_G_POINTS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckName {
    Parity,
    Decoupled,
    DenseOracle,
    CouplingSweep,
    Critical,
    GapExponent,
    CriticalLimits,
    CriticalExponents,
    Collapse,
    Universal,
}

impl CheckName {
    pub const ALL: [CheckName; 10] = [
        CheckName::Parity,
        CheckName::Decoupled,
        CheckName::DenseOracle,
        CheckName::CouplingSweep,
        CheckName::Critical,
        CheckName::GapExponent,
        CheckName::CriticalLimits,
        CheckName::CriticalExponents,
        CheckName::Collapse,
        CheckName::Universal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckName::Parity => "parity",
            CheckName::Decoupled => "decoupled",
            CheckName::DenseOracle => "dense-oracle",
            CheckName::CouplingSweep => "coupling-sweep",
            CheckName::Critical => "critical",
            CheckName::GapExponent => "gap-exponent",
            CheckName::CriticalLimits => "critical-limits",
            CheckName::CriticalExponents => "critical-exponents",
            CheckName::Collapse => "collapse",
            CheckName::Universal => "universal",
        }
    }

    /// Position in the acceptance list, starting at 1.
    pub fn number(self) -> usize {
        Self::ALL.iter().position(|&c| c == self).unwrap() + 1
    }

    pub fn budget(self) -> Duration {
        let secs = match self {
            CheckName::Parity | CheckName::Decoupled | CheckName::GapExponent => 1,
            CheckName::DenseOracle => 30,
            CheckName::Universal => 60,
            CheckName::CouplingSweep | CheckName::Critical => 600,
            CheckName::CriticalLimits => 900,
            CheckName::CriticalExponents | CheckName::Collapse => 1200,
        };
        Duration::from_secs(secs)
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|c| c.name() == key)
            .ok_or_else(|| {
                let known: Vec<&str> = Self::ALL.iter().map(|c| c.name()).collect();
                Error::InvalidParameter(format!(
                    "unknown check '{s}', expected one of {}",
                    known.join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub check: CheckName,
    pub passed: bool,
    /// Numbers behind the verdict, or the error that stopped the check.
    pub summary: String,
    pub elapsed: Duration,
}

impl CheckReport {
    pub fn line(&self) -> String {
        format!(
            "{} [{:>2}] {:<18} {} ({:.2} s, budget {} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.check.number(),
            self.check.name(),
            self.summary,
            self.elapsed.as_secs_f64(),
            self.check.budget().as_secs()
        )
    }
}

pub fn run_check(check: CheckName) -> CheckReport {
    let start = Instant::now();
    let outcome = match check {
        CheckName::Parity => parity(),
        CheckName::Decoupled => decoupled(),
        CheckName::DenseOracle => dense_oracle(),
        CheckName::CouplingSweep => coupling_sweep(),
        CheckName::Critical => critical(),
        CheckName::GapExponent => gap_exponent(),
        CheckName::CriticalLimits => critical_limits(),
        CheckName::CriticalExponents => critical_exponents(),
        CheckName::Collapse => collapse(),
        CheckName::Universal => universal(),
    };
    let elapsed = start.elapsed();
    let (ok, summary) = match outcome {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    let in_time = elapsed <= check.budget();
    CheckReport {
        check,
        passed: ok && in_time,
        summary: if in_time {
            summary
        } else {
            format!("{summary}; over budget")
        },
        elapsed,
    }
}

pub fn run_checks(checks: &[CheckName]) -> Vec<CheckReport> {
    checks.iter().map(|&c| run_check(c)).collect()
}

type Outcome = Result<(bool, String)>;

fn base(g: f64, n: usize) -> Result<ModelParams> {
    ModelParams::new(OMEGA, OMEGA1, g, n)
}

fn parity() -> Outcome {
    let mut worst_comm = 0.0f64;
    let mut worst_order = 0.0f64;
    for n in [1, 2, 5, 20] {
        for n_max in [4, 64] {
            let pi = parity_operator(n, n_max)?;
            let pi2 = pi.try_mul(&pi)?;
            let pi4 = pi2.try_mul(&pi2)?;
            let id = crate::operator::SpinPhotonOperator::identity(pi.dim());
            worst_order = worst_order.max(pi4.try_sub(&id)?.max_abs());
            for g in [0.0, 0.3 * OMEGA] {
                let h = assemble_hamiltonian(&base(g, n)?, &TruncationSpec::fixed(n_max)?)?
                    .to_complex();
                worst_comm = worst_comm.max(h.commutator(&pi)?.max_abs());
            }
        }
    }
    Ok((
        worst_comm <= 1e-12 && worst_order <= 1e-12,
        format!("max |[H,P]| = {worst_comm:.3e}, max |P^4 - I| = {worst_order:.3e}"),
    ))
}

fn decoupled() -> Outcome {
    let mut worst = 0.0f64;
    let mut ok = true;
    for (n, delta) in [(1, 0.3), (4, 0.1), (10, 0.05), (20, 1.5)] {
        let p = ModelParams::from_delta(OMEGA, delta, 0.0, n)?;
        let sol = converge_cutoff(&p, &TruncationSpec::default())?;
        let expected = -(n as f64) * delta / 2.0;
        let zeta = normal_phase(&p)?.zeta;
        let gap_err = (sol.gap - delta.min(OMEGA)).abs();
        worst = worst.max(gap_err);
        ok &= sol.ground_energy() == expected
            && sol.jz_per_atom == -0.5
            && gap_err <= 1e-12
            && zeta == 0.0;
    }
    Ok((
        ok,
        format!("E_g = -N delta/2, Jz/N = -1/2, zeta = 0 exact; max gap error {worst:.3e}"),
    ))
}

fn dense_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0dd_c0de);
    let mut worst = 0.0f64;
    let mut max_dim = 0;
    for _ in 0..20 {
        let n = rng.random_range(1..=12usize);
        let n_max = rng.random_range(4..=(500 / (n + 1) - 1));
        let omega = rng.random_range(0.5..2.0);
        let omega1 = rng.random_range(0.05..omega);
        let g = rng.random_range(0.0..0.95 * omega / 2.0);
        let h = assemble_hamiltonian(
            &ModelParams::new(omega, omega1, g, n)?,
            &TruncationSpec::fixed(n_max)?,
        )?;
        max_dim = max_dim.max(h.dim());
        let krylov = krylov_lowest(&h, 4, &KrylovOptions::default())?;
        let dense = dense_lowest(&h, 4)?;
        for (a, b) in krylov.values.iter().zip(&dense.values) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok((
        worst <= 1e-10,
        format!(
            "max |lambda_krylov - lambda_dense| = {worst:.3e} over 20 instances, dim <= {max_dim}"
        ),
    ))
}

fn sweep_grid() -> Vec<f64> {
    (1..=SWEEP_POINTS)
        .map(|i| 0.5 * OMEGA * i as f64 / (SWEEP_POINTS + 1) as f64)
        .collect()
}

fn sweep_rows() -> &'static [SweepRow] {
    static ROWS: OnceLock<Vec<SweepRow>> = OnceLock::new();
    ROWS.get_or_init(|| {
        let grid: Vec<ModelParams> = sweep_grid()
            .into_iter()
            .map(|g| base(g, SWEEP_N).unwrap())
            .collect();
        sweep(&grid, &TruncationSpec::default(), &SolverOptions::default())
    })
}

fn coupling_sweep() -> Outcome {
    let g_c = base(0.0, SWEEP_N)?.g_c();
    let (mut de, mut dj) = (0.0f64, 0.0f64);
    let mut compared = 0;
    for row in sweep_rows() {
        let p = row.params;
        if (p.g() - g_c).abs() < 0.05 * g_c {
            continue;
        }
        let sol = row.result.as_ref().map_err(Clone::clone)?;
        let analytic = phase_result(&p)?.ground_energy();
        de = de.max((sol.ground_energy() - analytic).abs() / OMEGA1);
        dj = dj.max((sol.jz_per_atom - jz_thermo(&p)?).abs());
        compared += 1;
    }
    Ok((
        de <= 0.01 && dj <= 0.02,
        format!("{compared} points: max |dE_g|/w1 = {de:.4}, max |dJz/N| = {dj:.4}"),
    ))
}

fn critical() -> Outcome {
    let cp = critical_couplings(OMEGA, OMEGA1)?;
    let exact_c = (OMEGA * OMEGA1).sqrt() / 2.0;
    let closed = (cp.g_c - exact_c).abs() <= 1e-15 && (cp.g_collapse - OMEGA / 2.0).abs() <= 1e-15;
    let mut points = Vec::new();
    for row in sweep_rows() {
        let sol = row.result.as_ref().map_err(Clone::clone)?;
        points.push((row.params.g(), sol.jz_per_atom + 0.5));
    }
    let threshold = 0.01;
    let crossing = points
        .windows(2)
        .find(|w| w[0].1 < threshold && w[1].1 >= threshold)
        .map(|w| w[0].0 + (threshold - w[0].1) * (w[1].0 - w[0].0) / (w[1].1 - w[0].1));
    let Some(g_star) = crossing else {
        return Ok((false, "Jz/N never departs from -1/2 by 0.01".into()));
    };
    let rel = (g_star - exact_c) / exact_c;
    Ok((
        closed && rel.abs() <= 0.02,
        format!(
            "g_c = {:.6}, g_collapse = {:.6}; ED crossing at g = {g_star:.5} ({:+.2}% of g_c)",
            cp.g_c,
            cp.g_collapse,
            100.0 * rel
        ),
    ))
}

fn gap_exponent() -> Outcome {
    let p = base(0.0, SWEEP_N)?;
    let g_c = p.g_c();
    let ts: Vec<f64> = (0..12)
        .map(|i| 10f64.powf(-5.0 + 3.0 * i as f64 / 11.0))
        .collect();
    let mut below = Vec::new();
    let mut above = Vec::new();
    for &t in &ts {
        below.push(normal_phase(&p.with_g(g_c * (1.0 - t))?)?.epsilon1);
        above.push(superradiant_phase(&p.with_g(g_c * (1.0 + t))?)?.epsilon2);
    }
    let dg: Vec<f64> = ts.iter().map(|t| t * g_c).collect();
    let s1 = power_law_fit(&dg, &below)?.slope;
    let s2 = power_law_fit(&dg, &above)?.slope;
    Ok((
        (s1 - 0.5).abs() <= 0.005 && (s2 - 0.5).abs() <= 0.05,
        format!("slope eps1 = {s1:.5}, slope eps2 = {s2:.4}"),
    ))
}

/// `(N, E_g/ω₁, ⟨J_z⟩/N, ⟨J_y²⟩/N²)` at `g_c`.
type CriticalSample = (usize, f64, f64, f64);

fn critical_samples() -> &'static Result<Vec<CriticalSample>> {
    static SAMPLES: OnceLock<Result<Vec<CriticalSample>>> = OnceLock::new();
    SAMPLES.get_or_init(|| {
        CRITICAL_SIZES
            .par_iter()
            .map(|&n| {
                let p = base(0.0, n)?;
                let sol = converge_cutoff(&p.with_g(p.g_c())?, &TruncationSpec::default())?;
                Ok((
                    n,
                    sol.ground_energy() / OMEGA1,
                    sol.jz_per_atom,
                    sol.jy2_per_atom2,
                ))
            })
            .collect()
    })
}

fn sample_column(samples: &[(usize, f64, f64, f64)], q: Quantity) -> Vec<f64> {
    samples
        .iter()
        .map(|s| match q {
            Quantity::Energy => s.1,
            Quantity::Jz => s.2,
            Quantity::Jy2 => s.3,
        })
        .collect()
}

fn critical_limits() -> Outcome {
    let samples = critical_samples().as_ref().map_err(Clone::clone)?;
    let ns: Vec<usize> = samples.iter().map(|s| s.0).collect();
    let mut ok = true;
    let mut parts = Vec::new();
    for (q, power) in [
        (Quantity::Energy, 1.0),
        (Quantity::Jz, 2.0 / 3.0),
        (Quantity::Jy2, 4.0 / 3.0),
    ] {
        let fit = extrapolate_limit(&ns, &sample_column(samples, q), power)?;
        ok &= (fit.intercept - q.critical_limit()).abs() <= 0.01;
        parts.push(format!("{q} -> {:.5}", fit.intercept));
    }
    Ok((ok, parts.join(", ")))
}

fn critical_exponents() -> Outcome {
    let samples = critical_samples().as_ref().map_err(Clone::clone)?;
    let p = base(0.0, CRITICAL_SIZES[0])?;
    let at_gc = p.with_g(p.g_c())?;
    let mut ok = true;
    let mut parts = Vec::new();
    for (q, tol) in [
        (Quantity::Energy, 0.1),
        (Quantity::Jz, 0.05),
        (Quantity::Jy2, 0.1),
    ] {
        let column = sample_column(samples, q);
        let mut pairs: Vec<(usize, f64)> = samples.iter().map(|s| s.0).zip(column).collect();
        if q == Quantity::Energy {
            for pair in &mut pairs {
                pair.1 *= OMEGA1;
            }
        }
        let fit = fit_exponent(q, &at_gc, &pairs)?;
        ok &= (fit.slope + q.exponent()).abs() <= tol;
        parts.push(format!("{q} {:.4} (-{})", fit.slope, q.exponent_label()));
    }
    Ok((ok, parts.join(", ")))
}

fn collapse() -> Outcome {
    let p = base(0.0, 1)?;
    let grid = default_g_grid(OMEGA, OMEGA1, COLLAPSE_G_POINTS)?;
    let opts = CollapseOptions::default();
    let samples: Vec<CollapseSample> =
        collapse_samples(&p, &COLLAPSE_SIZES, &grid, CollapseSource::Ed, &opts)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for q in Quantity::ALL {
        let curves = curves_from_samples(&p, &samples, q, opts.energy_regular)?;
        let report = collapse_spread(&curves, opts.eta_window, opts.bins)?;
        ok &= report.spread <= 0.1;
        parts.push(format!(
            "{q} {:.3} (eta {:+.2})",
            report.spread, report.worst_eta
        ));
    }
    Ok((ok, format!("spread {}", parts.join(", "))))
}

fn universal() -> Outcome {
    let harmonic = QuarticWellSpec::harmonic();
    let mut harm_err = 0.0f64;
    for eta in [0.5, 1.0, 2.0, 4.0] {
        let pt = universal_point(&harmonic, eta)?;
        let w = (2.0 * eta).sqrt();
        for (got, want) in [(pt.e0, w / 2.0), (pt.x2, 1.0 / (2.0 * w)), (pt.p2, w / 2.0)] {
            harm_err = harm_err.max(((got - want) / want).abs());
        }
    }
    let spec = QuarticWellSpec::frozen(OMEGA, OMEGA1)?;
    let etas: Vec<f64> = (0..=24).map(|i| -2.0 + 0.25 * i as f64).collect();
    let points = universal_functions(&spec, &etas)?;
    let k = spec.quartic_coeff;
    let mut virial = 0.0f64;
    let mut resolved = 0;
    let mut converged = true;
    for pt in points.iter().filter(|p| p.resolved) {
        resolved += 1;
        converged &= pt.grid_converged;
        virial = virial.max((pt.p2 - (2.0 * pt.eta * pt.x2 - 4.0 * k * pt.x4)).abs());
    }
    Ok((
        harm_err <= 1e-6 && virial <= 1e-5 && converged && resolved > 0,
        format!("harmonic rel. error {harm_err:.2e}, virial error {virial:.2e} on {resolved}/{} resolved points", etas.len()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for c in CheckName::ALL {
            assert_eq!(c.name().parse::<CheckName>().unwrap(), c);
        }
        assert_eq!(CheckName::Parity.number(), 1);
        assert_eq!(CheckName::Universal.number(), 10);
        assert!("everything".parse::<CheckName>().unwrap_err().is_usage());
    }

    #[test]
    fn report_line_format() {
        let r = CheckReport {
            check: CheckName::Parity,
            passed: true,
            summary: "ok".into(),
            elapsed: Duration::from_millis(20),
        };
        assert!(r.line().starts_with("PASS [ 1] parity"));
    }
}
