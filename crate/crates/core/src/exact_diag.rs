//! Lowest eigenpairs of the truncated Hamiltonian, photon-cutoff
//! convergence and ground-state observables.

use log::{debug, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dense_lowest, krylov_lowest, EigenPairs, KrylovOptions};
use crate::model::{
    build_photon_operators, build_spin_operators, hamiltonian_at_cutoff, sector_indices,
    HilbertSpace, PhotonParity,
};
use crate::operator::SpinPhotonOperator;
use crate::params::{ModelParams, TruncationSpec};

/// Number of levels kept by default: the quasi-degenerate doublet of the
/// super-radiant phase plus the first excitation above it.
pub const DEFAULT_LEVELS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolverMethod {
    /// Dense below `dense_threshold`, Krylov above.
    Auto,
    Dense,
    Krylov,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub method: SolverMethod,
    pub dense_threshold: usize,
    pub krylov: KrylovOptions,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            method: SolverMethod::Auto,
            dense_threshold: 64,
            krylov: KrylovOptions::default(),
        }
    }
}

/// Lowest `k` eigenpairs of a real symmetric operator, ascending, with
/// orthonormal vectors.
pub fn lowest_eigenpairs(
    h: &SpinPhotonOperator,
    k: usize,
    opts: &SolverOptions,
) -> Result<EigenPairs> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let dense = match opts.method {
        SolverMethod::Dense => true,
        SolverMethod::Krylov => false,
        SolverMethod::Auto => h.dim() <= opts.dense_threshold,
    };
    if dense {
        dense_lowest(h, k)
    } else {
        krylov_lowest(h, k, &opts.krylov)
    }
}

/// Ground state of one parameter point together with its cutoff certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundStateSolution {
    pub params: ModelParams,
    /// Lowest levels over both photon-parity blocks, ascending.
    pub energy_levels: Vec<f64>,
    /// Ground state on the full spin ⊗ Fock basis at `n_max_used`.
    pub ground_vector: Vec<f64>,
    pub jz_per_atom: f64,
    pub jy2_per_atom2: f64,
    pub photon_number: f64,
    /// `E_1 - E_0`.
    pub gap: f64,
    pub n_max_used: usize,
    pub converged: bool,
    /// `‖H v - E_0 v‖`.
    pub residual: f64,
    /// Photon parity of the block holding the ground state.
    pub ground_parity: PhotonParity,
    /// `(n_max, E_0)` for every cutoff tried.
    pub history: Vec<(usize, f64)>,
}

impl GroundStateSolution {
    pub fn ground_energy(&self) -> f64 {
        self.energy_levels[0]
    }

    pub fn space(&self) -> HilbertSpace {
        HilbertSpace::new(self.params.n_atoms(), self.n_max_used)
    }
}

/// `J_z ⊗ 1`, `J_y² ⊗ 1` and `1 ⊗ a†a` on a truncated space.
#[derive(Debug, Clone)]
pub struct ObservableSet {
    pub jz: SpinPhotonOperator,
    pub jy2: SpinPhotonOperator,
    pub number: SpinPhotonOperator,
}

impl ObservableSet {
    pub fn new(space: HilbertSpace) -> Result<Self> {
        let spin = build_spin_operators(space.n_atoms)?;
        let photon = build_photon_operators(space.n_max)?;
        let id_spin = SpinPhotonOperator::<f64>::identity(space.spin_dim());
        let id_fock = SpinPhotonOperator::<f64>::identity(space.fock_dim());
        Ok(Self {
            jz: spin.jz.kron(&id_fock),
            jy2: spin.jy2.kron(&id_fock),
            number: id_spin.kron(&photon.number),
        })
    }
}

/// `⟨v|O|v⟩` for each operator on the solution's ground state.
pub fn observables(sol: &GroundStateSolution, ops: &[&SpinPhotonOperator]) -> Result<Vec<f64>> {
    ops.iter()
        .map(|op| op.expectation(&sol.ground_vector))
        .collect()
}

struct CutoffSolve {
    levels: Vec<f64>,
    ground: Vec<f64>,
    residual: f64,
    parity: PhotonParity,
}

fn solve_at_cutoff(
    params: &ModelParams,
    n_max: usize,
    max_dim: usize,
    k: usize,
    opts: &SolverOptions,
) -> Result<CutoffSolve> {
    let h = hamiltonian_at_cutoff(params, n_max, max_dim)?;
    let space = HilbertSpace::new(params.n_atoms(), n_max);
    let blocks = [PhotonParity::Even, PhotonParity::Odd].map(|parity| {
        let indices = sector_indices(&space, parity);
        let pairs = h
            .restrict(&indices)
            .and_then(|block| lowest_eigenpairs(&block, k, opts));
        (parity, indices, pairs)
    });

    let mut merged: Vec<(f64, usize, usize)> = Vec::new();
    let mut solved = Vec::new();
    for (b, (parity, indices, pairs)) in blocks.into_iter().enumerate() {
        let pairs = pairs?;
        merged.extend(pairs.values.iter().enumerate().map(|(i, &e)| (e, b, i)));
        solved.push((parity, indices, pairs));
    }
    merged.sort_by(|a, b| a.0.total_cmp(&b.0));
    merged.truncate(k);

    let (_, b, i) = merged[0];
    let (parity, indices, pairs) = &solved[b];
    let mut ground = vec![0.0; space.dim()];
    for (&full, &c) in indices.iter().zip(&pairs.vectors[i]) {
        ground[full] = c;
    }
    // fix the overall sign so that output is reproducible
    let peak = ground
        .iter()
        .copied()
        .fold(0.0f64, |a, x| if x.abs() > a.abs() { x } else { a });
    if peak < 0.0 {
        ground.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(CutoffSolve {
        levels: merged.iter().map(|m| m.0).collect(),
        ground,
        residual: pairs.residuals[i],
        parity: *parity,
    })
}

fn check_below_collapse(params: &ModelParams) -> Result<()> {
    if params.g() >= params.g_collapse() {
        return Err(Error::domain(
            "g < g_collapse",
            format!(
                "g = {} is at or beyond the spectral collapse point g_collapse = omega/2 = {}; \
                 the Hamiltonian is unbounded below there",
                params.g(),
                params.g_collapse()
            ),
        ));
    }
    Ok(())
}

/// Ground state with the photon cutoff doubled from `trunc.n_max` until the
/// ground energy changes by at most `rel_tol * |E_0|`.
pub fn converge_cutoff(
    params: &ModelParams,
    trunc: &TruncationSpec,
) -> Result<GroundStateSolution> {
    converge_cutoff_with(params, trunc, DEFAULT_LEVELS, &SolverOptions::default())
}

pub fn converge_cutoff_with(
    params: &ModelParams,
    trunc: &TruncationSpec,
    k: usize,
    opts: &SolverOptions,
) -> Result<GroundStateSolution> {
    check_below_collapse(params)?;
    trunc.validate()?;
    let k = k.max(2);

    let mut n_max = trunc.n_max;
    let mut current = solve_at_cutoff(params, n_max, trunc.max_dim, k, opts)?;
    let mut history = vec![(n_max, current.levels[0])];
    let mut converged = false;
    while n_max < trunc.n_max_ceiling {
        let next = (2 * n_max).min(trunc.n_max_ceiling);
        if HilbertSpace::new(params.n_atoms(), next).dim() > trunc.max_dim {
            warn!(
                "cutoff doubling stopped at n_max = {n_max}: dimension limit {}",
                trunc.max_dim
            );
            break;
        }
        let refined = solve_at_cutoff(params, next, trunc.max_dim, k, opts)?;
        let change = (refined.levels[0] - current.levels[0]).abs();
        history.push((next, refined.levels[0]));
        debug!(
            "n_max {next}: E0 = {:.15e}, change {change:.3e}",
            refined.levels[0]
        );
        n_max = next;
        current = refined;
        if change <= trunc.rel_tol * current.levels[0].abs() {
            converged = true;
            break;
        }
    }
    if !converged {
        warn!(
            "photon cutoff not converged for g = {}, N = {} (last n_max = {n_max})",
            params.g(),
            params.n_atoms()
        );
    }

    let space = HilbertSpace::new(params.n_atoms(), n_max);
    let ops = ObservableSet::new(space)?;
    let v = &current.ground;
    let n = params.n();
    let gap = if current.levels.len() > 1 {
        current.levels[1] - current.levels[0]
    } else {
        f64::NAN
    };
    Ok(GroundStateSolution {
        params: *params,
        jz_per_atom: ops.jz.expectation(v)? / n,
        jy2_per_atom2: ops.jy2.expectation(v)? / (n * n),
        photon_number: ops.number.expectation(v)?,
        gap,
        n_max_used: n_max,
        converged,
        residual: current.residual,
        ground_parity: current.parity,
        energy_levels: current.levels,
        ground_vector: current.ground,
        history,
    })
}

/// One row of a parameter sweep; failures are kept rather than aborting.
#[derive(Debug)]
pub struct SweepRow {
    pub params: ModelParams,
    pub result: Result<GroundStateSolution>,
}

/// `converge_cutoff` over a grid, rows evaluated concurrently and returned
/// in input order.
pub fn sweep(grid: &[ModelParams], trunc: &TruncationSpec, opts: &SolverOptions) -> Vec<SweepRow> {
    grid.par_iter()
        .map(|params| SweepRow {
            params: *params,
            result: converge_cutoff_with(params, trunc, DEFAULT_LEVELS, opts),
        })
        .collect()
}
