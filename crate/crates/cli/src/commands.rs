use std::io::Write;
use std::path::PathBuf;

use log::warn;
use serde_json::json;
use tpdicke_core::checks::{run_check, CheckName};
use tpdicke_core::fss::{
    collapse_samples, collapse_spread, curves_from_samples, default_g_grid, universal_functions,
    CollapseOptions, CollapseSource, EnergyRegular, Quantity, QuarticWellSpec,
};
use tpdicke_core::{
    converge_cutoff, jz_thermo, phase_result, sweep, ModelParams, SolverOptions, TruncationSpec,
};

use crate::args::{
    CollapseArgs, FrequencyArgs, GroundStateArgs, OutputArgs, Regular, SweepArgs, TruncArgs, Units,
    VerifyArgs,
};
use crate::config::{Config, List};
use crate::error::{CliError, CliResult};
use crate::output::{fmt_num, fmt_opt, RunWriter, Table};

const DEFAULT_OMEGA: f64 = 1.0;
const DEFAULT_OMEGA1: f64 = 0.5;
const DEFAULT_N: usize = 100;
const DEFAULT_SWEEP_POINTS: usize = 40;
const DEFAULT_COLLAPSE_POINTS: usize = 60;
const DEFAULT_SIZES: [usize; 5] = [5, 10, 30, 50, 100];

struct Output {
    dir: PathBuf,
    units: Units,
}

impl Output {
    /// Divisor applied to energies and frequencies.
    fn scale(&self, params: &ModelParams) -> f64 {
        match self.units {
            Units::Omega => params.omega(),
            Units::Raw => 1.0,
        }
    }
}

fn resolve_output(cfg: &mut Config, o: &OutputArgs) -> CliResult<Output> {
    Ok(Output {
        dir: cfg
            .pick(o.out.clone(), "out")?
            .unwrap_or_else(|| PathBuf::from(".")),
        units: cfg.pick(o.units, "units")?.unwrap_or(Units::Omega),
    })
}

fn resolve_trunc(cfg: &mut Config, t: &TruncArgs) -> CliResult<TruncationSpec> {
    let d = TruncationSpec::default();
    Ok(TruncationSpec::new(
        cfg.pick(t.n_max, "n-max")?.unwrap_or(d.n_max),
        cfg.pick(t.rel_tol, "rel-tol")?.unwrap_or(d.rel_tol),
        cfg.pick(t.n_max_ceiling, "n-max-ceiling")?
            .unwrap_or(d.n_max_ceiling),
    )?)
}

fn resolve_params(
    cfg: &mut Config,
    f: &FrequencyArgs,
    n_atoms: Option<usize>,
    g: f64,
) -> CliResult<ModelParams> {
    let omega = cfg.pick(f.omega, "omega")?.unwrap_or(DEFAULT_OMEGA);
    let n = cfg.pick(n_atoms, "N")?.unwrap_or(DEFAULT_N);
    let cfg_omega1 = cfg.pick::<f64>(None, "omega1")?;
    let cfg_delta = cfg.pick::<f64>(None, "delta")?;
    let (omega1, delta) = if f.omega1.is_some() || f.delta.is_some() {
        (f.omega1, f.delta)
    } else {
        (cfg_omega1, cfg_delta)
    };
    Ok(match (omega1, delta) {
        (Some(_), Some(_)) => return Err(CliError::usage("give either omega1 or delta, not both")),
        (_, Some(delta)) => ModelParams::from_delta(omega, delta, g, n)?,
        (omega1, None) => ModelParams::new(omega, omega1.unwrap_or(DEFAULT_OMEGA1), g, n)?,
    })
}

fn diff(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    Some(a? - b?)
}

pub fn ground_state(args: &GroundStateArgs) -> CliResult<()> {
    let mut cfg = Config::load(args.output.config.as_deref())?;
    let out = resolve_output(&mut cfg, &args.output)?;
    let trunc = resolve_trunc(&mut cfg, &args.trunc)?;
    let g = cfg
        .pick(args.g, "g")?
        .ok_or_else(|| CliError::usage("--g is required"))?;
    let p = resolve_params(&mut cfg, &args.freq, args.n_atoms, g)?;
    cfg.finish()?;

    let sol = converge_cutoff(&p, &trunc)?;
    if !sol.converged {
        return Err(CliError::failure(format!(
            "photon cutoff did not converge up to n_max = {} (E_0 history {:?})",
            sol.n_max_used, sol.history
        )));
    }
    let analytic = phase_result(&p)
        .map_err(|e| warn!("no closed-form energy at g = {}: {e}", p.g()))
        .ok();
    let jz_an = jz_thermo(&p).ok();
    let u = out.scale(&p);
    let w1 = p.omega1();

    let mut table = Table::new(
        "ground_state",
        &["quantity", "numerical", "analytic", "difference"],
    );
    let mut row = |name: &str, num: Option<f64>, an: Option<f64>| {
        table.push(vec![
            name.to_string(),
            fmt_opt(num),
            fmt_opt(an),
            fmt_opt(diff(num, an)),
        ]);
    };
    let eg = sol.ground_energy();
    row("eg", Some(eg / u), analytic.map(|a| a.ground_energy() / u));
    row(
        "eg_over_omega1",
        (w1 > 0.0).then(|| eg / w1),
        analytic
            .filter(|_| w1 > 0.0)
            .map(|a| a.ground_energy() / w1),
    );
    row("jz", Some(sol.jz_per_atom), jz_an);
    row("jy2", Some(sol.jy2_per_atom2), None);
    row(
        "gap",
        Some(sol.gap / u),
        analytic.map(|a| a.excitation_energy() / u),
    );
    row("photon_number", Some(sol.photon_number), None);
    row("n_max_used", Some(sol.n_max_used as f64), None);

    let mut writer = RunWriter::new(&out.dir)?;
    writer.write_table("ground_state.csv", &table)?;
    let manifest = writer.finish(
        "ground-state",
        p,
        trunc,
        json!({ "units": format!("{:?}", out.units).to_lowercase() }),
    )?;
    println!(
        "E_g = {} (analytic {}), <Jz>/N = {}, gap = {}; wrote {}",
        fmt_num(eg / u),
        fmt_opt(analytic.map(|a| a.ground_energy() / u)),
        fmt_num(sol.jz_per_atom),
        fmt_num(sol.gap / u),
        manifest.display()
    );
    Ok(())
}

fn sweep_grid(
    g_min: Option<f64>,
    g_max: Option<f64>,
    points: usize,
    g_collapse: f64,
) -> CliResult<Vec<f64>> {
    if points == 0 {
        return Err(CliError::usage(
            "empty coupling grid: --points must be at least 1",
        ));
    }
    let grid: Vec<f64> = match (g_min, g_max) {
        (None, None) => (1..=points)
            .map(|i| g_collapse * i as f64 / (points + 1) as f64)
            .collect(),
        (lo, hi) => {
            let lo = lo.unwrap_or(0.0);
            let hi = hi.unwrap_or(g_collapse * points as f64 / (points + 1) as f64);
            if lo > hi {
                return Err(CliError::usage(format!(
                    "empty coupling grid: g-min {lo} > g-max {hi}"
                )));
            }
            if points == 1 {
                vec![lo]
            } else {
                (0..points)
                    .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
                    .collect()
            }
        }
    };
    if let Some(g) = grid.iter().find(|&&g| !(g >= 0.0 && g < g_collapse)) {
        return Err(CliError::usage(format!(
            "g < g_collapse violated: grid point g = {g}, g_collapse = {g_collapse}"
        )));
    }
    Ok(grid)
}

pub fn sweep_cmd(args: &SweepArgs) -> CliResult<()> {
    let mut cfg = Config::load(args.output.config.as_deref())?;
    let out = resolve_output(&mut cfg, &args.output)?;
    let trunc = resolve_trunc(&mut cfg, &args.trunc)?;
    let g_min = cfg.pick(args.g_min, "g-min")?;
    let g_max = cfg.pick(args.g_max, "g-max")?;
    let points = cfg
        .pick(args.points, "points")?
        .unwrap_or(DEFAULT_SWEEP_POINTS);
    let base = resolve_params(&mut cfg, &args.freq, args.n_atoms, 0.0)?;
    cfg.finish()?;

    let grid = sweep_grid(g_min, g_max, points, base.g_collapse())?;
    let params: Vec<ModelParams> = grid
        .iter()
        .map(|&g| base.with_g(g))
        .collect::<Result<_, _>>()?;
    let rows = sweep(&params, &trunc, &SolverOptions::default());

    let u = out.scale(&base);
    let mut table = Table::new(
        "sweep",
        &[
            "g",
            "g_over_omega",
            "eg_ed",
            "eg_analytic",
            "jz_ed",
            "jz_analytic",
            "jy2_ed",
            "gap_ed",
            "epsilon_analytic",
            "status",
        ],
    );
    let mut failed = 0;
    for row in &rows {
        let p = row.params;
        let analytic = phase_result(&p).ok();
        let jz_an = jz_thermo(&p).ok();
        let (ed, status) = match &row.result {
            Ok(sol) if sol.converged => (
                Some(sol),
                if analytic.is_some() {
                    "ok".to_string()
                } else {
                    "no-analytic".to_string()
                },
            ),
            Ok(sol) => (Some(sol), "unconverged-cutoff".to_string()),
            Err(e) => {
                failed += 1;
                (None, format!("failed: {e}"))
            }
        };
        table.push(vec![
            fmt_num(p.g()),
            fmt_num(p.g() / p.omega()),
            fmt_opt(ed.map(|s| s.ground_energy() / u)),
            fmt_opt(analytic.map(|a| a.ground_energy() / u)),
            fmt_opt(ed.map(|s| s.jz_per_atom)),
            fmt_opt(jz_an),
            fmt_opt(ed.map(|s| s.jy2_per_atom2)),
            fmt_opt(ed.map(|s| s.gap / u)),
            fmt_opt(analytic.map(|a| a.excitation_energy() / u)),
            status,
        ]);
    }

    let mut writer = RunWriter::new(&out.dir)?;
    writer.write_table("sweep.csv", &table)?;
    let manifest = writer.finish(
        "sweep",
        base,
        trunc,
        json!({ "grid": grid, "units": format!("{:?}", out.units).to_lowercase() }),
    )?;
    println!(
        "{} couplings, {failed} failed; wrote {}",
        rows.len(),
        manifest.display()
    );
    if failed > 0 {
        return Err(CliError::failure(format!(
            "{failed} sweep rows failed, see the status column"
        )));
    }
    Ok(())
}

fn parse_quantities(s: &str) -> CliResult<Vec<Quantity>> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(Quantity::ALL.to_vec());
    }
    let List(list) = s.parse::<List<Quantity>>().map_err(CliError::usage)?;
    if list.is_empty() {
        return Err(CliError::usage("no quantity selected"));
    }
    Ok(list)
}

pub fn collapse_cmd(args: &CollapseArgs) -> CliResult<()> {
    let mut cfg = Config::load(args.output.config.as_deref())?;
    let out = resolve_output(&mut cfg, &args.output)?;
    let trunc = resolve_trunc(&mut cfg, &args.trunc)?;
    let omega = cfg.pick(args.omega, "omega")?.unwrap_or(DEFAULT_OMEGA);
    let omega1 = cfg.pick(args.omega1, "omega1")?.unwrap_or(DEFAULT_OMEGA1);
    let quantities = parse_quantities(
        &cfg.pick(args.quantity.clone(), "quantity")?
            .unwrap_or_else(|| "all".into()),
    )?;
    let sizes = match cfg.pick(args.sizes.clone(), "sizes")? {
        Some(s) => s.parse::<List<usize>>().map_err(CliError::usage)?.0,
        None => DEFAULT_SIZES.to_vec(),
    };
    let source: CollapseSource = cfg
        .pick(args.source.clone(), "source")?
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(CollapseSource::Ed);
    let points = cfg
        .pick(args.points, "points")?
        .unwrap_or(DEFAULT_COLLAPSE_POINTS);
    let regular = cfg
        .pick(args.regular, "regular")?
        .unwrap_or(Regular::Constant);
    let max_spread = cfg.pick(args.max_spread, "max-spread")?;
    cfg.finish()?;
    if points == 0 {
        return Err(CliError::usage(
            "empty coupling grid: --points must be at least 1",
        ));
    }

    let base = ModelParams::new(omega, omega1, 0.0, 1)?;
    let opts = CollapseOptions {
        energy_regular: match regular {
            Regular::Constant => EnergyRegular::Constant,
            Regular::Short => EnergyRegular::Short,
        },
        trunc,
        ..CollapseOptions::default()
    };
    let grid = default_g_grid(omega, omega1, points)?;
    let samples = collapse_samples(&base, &sizes, &grid, source, &opts)?;

    let mut writer = RunWriter::new(&out.dir)?;
    let mut spreads = Table::new(
        "collapse_spread",
        &[
            "quantity",
            "exponent",
            "spread",
            "worst_eta",
            "overlapping_bins",
            "data_range",
        ],
    );
    let mut exceeded = Vec::new();
    for &q in &quantities {
        let curves = curves_from_samples(&base, &samples, q, opts.energy_regular)?;
        let scale = if q == Quantity::Energy {
            out.scale(&base)
        } else {
            1.0
        };
        for c in &curves {
            let mut t = Table::new("collapse_curve", &["eta", "rescaled"]);
            for &(eta, v) in &c.points {
                t.push(vec![fmt_num(eta), fmt_num(v / scale)]);
            }
            writer.write_table(&format!("collapse_{}_N{}.csv", q, c.n_atoms), &t)?;
        }
        let report = collapse_spread(&curves, opts.eta_window, opts.bins)?;
        spreads.push(vec![
            q.to_string(),
            q.exponent_label().to_string(),
            fmt_num(report.spread),
            fmt_num(report.worst_eta),
            report.overlapping_bins.to_string(),
            fmt_num(report.data_range / scale),
        ]);
        println!(
            "{q}: spread {} (worst at eta = {})",
            fmt_num(report.spread),
            fmt_num(report.worst_eta)
        );
        if max_spread.is_some_and(|m| report.spread > m) {
            exceeded.push(q.to_string());
        }
    }
    writer.write_table("collapse_spread.csv", &spreads)?;

    let spec = QuarticWellSpec::for_params(&base)?;
    let (lo, hi) = opts.eta_window;
    let steps = 80;
    let etas: Vec<f64> = (0..=steps)
        .map(|i| lo + (hi - lo) * i as f64 / steps as f64)
        .collect();
    let mut universal = Table::new("universal", &["eta", "e0", "x2", "p2", "resolved"]);
    for pt in universal_functions(&spec, &etas)? {
        let keep = |v: f64| {
            if pt.resolved {
                fmt_num(v)
            } else {
                String::new()
            }
        };
        universal.push(vec![
            fmt_num(pt.eta),
            keep(pt.e0),
            keep(pt.x2),
            keep(pt.p2),
            pt.resolved.to_string(),
        ]);
    }
    writer.write_table("universal.csv", &universal)?;

    let manifest = writer.finish(
        "collapse",
        base,
        trunc,
        json!({
            "sizes": sizes,
            "quantities": quantities.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            "source": format!("{source:?}").to_lowercase(),
            "g_grid": grid,
            "eta_window": [lo, hi],
            "bins": opts.bins,
            "regular": format!("{regular:?}").to_lowercase(),
            "units": format!("{:?}", out.units).to_lowercase(),
        }),
    )?;
    println!("wrote {}", manifest.display());
    if !exceeded.is_empty() {
        return Err(CliError::failure(format!(
            "collapse spread above {} for {}",
            max_spread.unwrap_or_default(),
            exceeded.join(", ")
        )));
    }
    Ok(())
}

pub fn verify(args: &VerifyArgs) -> CliResult<()> {
    let checks: Vec<CheckName> = if args.only.is_empty() {
        CheckName::ALL.to_vec()
    } else {
        args.only
            .iter()
            .map(|s| s.parse())
            .collect::<Result<_, _>>()?
    };
    let mut failed = Vec::new();
    let stdout = std::io::stdout();
    for check in checks {
        let report = run_check(check);
        let mut lock = stdout.lock();
        writeln!(lock, "{}", report.line())?;
        lock.flush()?;
        if !report.passed {
            failed.push(check.name());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::failure(format!(
            "failed checks: {}",
            failed.join(", ")
        )))
    }
}
