//! Truncated spin ⊗ Fock space, operator matrices and the Hamiltonian
//!
//! `H = Δ J_z + ω a†a + (2g/N) (a†² + a²) J_x`
//!
//! in the symmetric pseudospin sector `j = N/2` (dimension `N + 1`). Basis
//! states `|j, m⟩ ⊗ |n⟩` are indexed `s * (n_max + 1) + n` with
//! `s = m + j ∈ 0..=N`, so `J_z = diag(-j, …, j)`. Ladder elements follow the
//! Condon–Shortley convention and are real and non-negative, which keeps
//! `H` real symmetric.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::SpinPhotonOperator;
use crate::params::{ModelParams, TruncationSpec};

/// Collective spin matrices on the `(N+1)`-dimensional symmetric sector.
#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub jx: SpinPhotonOperator,
    pub jy: SpinPhotonOperator<Complex64>,
    pub jz: SpinPhotonOperator,
    /// `J_y²`, real in this basis.
    pub jy2: SpinPhotonOperator,
}

/// Single-mode photon matrices on `0..=n_max`.
#[derive(Debug, Clone)]
pub struct PhotonOperators {
    pub number: SpinPhotonOperator,
    /// `a†² + a²`.
    pub two_photon: SpinPhotonOperator,
}

/// Spin ⊗ Fock product space with a photon cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HilbertSpace {
    pub n_atoms: usize,
    pub n_max: usize,
}

impl HilbertSpace {
    pub fn new(n_atoms: usize, n_max: usize) -> Self {
        Self { n_atoms, n_max }
    }

    pub fn spin_dim(&self) -> usize {
        self.n_atoms + 1
    }

    pub fn fock_dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn dim(&self) -> usize {
        self.spin_dim() * self.fock_dim()
    }

    pub fn index(&self, spin: usize, photons: usize) -> usize {
        spin * self.fock_dim() + photons
    }

    /// `(s, n)` with `s = m + j`.
    pub fn decompose(&self, index: usize) -> (usize, usize) {
        (index / self.fock_dim(), index % self.fock_dim())
    }

    fn check_dim(&self, limit: usize) -> Result<()> {
        let dim = self
            .spin_dim().saturating_mul(self.fock_dim());
        if dim > limit {
            return Err(Error::DimensionOverflow { dim, limit });
        }
        Ok(())
    }
}

pub fn build_spin_operators(n_atoms: usize) -> Result<SpinOperators> {
    if n_atoms < 1 {
        return Err(Error::InvalidParameter("n_atoms must be at least 1".into()));
    }
    let dim = n_atoms + 1;
    let j = 0.5 * n_atoms as f64;
    // <s+1|J+|s> = sqrt((j - m)(j + m + 1)) = sqrt((N - s)(s + 1))
    let ladder = |s: usize| (((n_atoms - s) * (s + 1)) as f64).sqrt();

    let jx = SpinPhotonOperator::from_triplets(
        dim,
        (0..n_atoms).flat_map(|s| {
            let v = 0.5 * ladder(s);
            [(s + 1, s, v), (s, s + 1, v)]
        }),
    )?;
    // J_y = (J+ - J-)/(2i)
    let jy = SpinPhotonOperator::from_triplets(
        dim,
        (0..n_atoms).flat_map(|s| {
            let v = 0.5 * ladder(s);
            [
                (s + 1, s, Complex64::new(0.0, -v)),
                (s, s + 1, Complex64::new(0.0, v)),
            ]
        }),
    )?;
    let jz = SpinPhotonOperator::diagonal((0..dim).map(|s| s as f64 - j));
    let jy2 = jy.try_mul(&jy)?.try_into_real()?;
    Ok(SpinOperators { jx, jy, jz, jy2 })
}

pub fn build_photon_operators(n_max: usize) -> Result<PhotonOperators> {
    if n_max < 2 {
        return Err(Error::InvalidParameter(format!(
            "n_max must be at least 2, got {n_max}"
        )));
    }
    let number = SpinPhotonOperator::diagonal((0..=n_max).map(|n| n as f64));
    let two_photon = SpinPhotonOperator::from_triplets(
        n_max + 1,
        (0..=n_max - 2).flat_map(|n| {
            let v = (((n + 1) * (n + 2)) as f64).sqrt();
            [(n, n + 2, v), (n + 2, n, v)]
        }),
    )?;
    Ok(PhotonOperators { number, two_photon })
}

/// `Δ (J_z ⊗ 1) + ω (1 ⊗ n̂) + (2g/N) (J_x ⊗ (a†² + a²))`.
pub fn assemble_hamiltonian(
    params: &ModelParams,
    trunc: &TruncationSpec,
) -> Result<SpinPhotonOperator> {
    trunc.validate()?;
    hamiltonian_at_cutoff(params, trunc.n_max, trunc.max_dim)
}

pub(crate) fn hamiltonian_at_cutoff(
    params: &ModelParams,
    n_max: usize,
    max_dim: usize,
) -> Result<SpinPhotonOperator> {
    let space = HilbertSpace::new(params.n_atoms(), n_max);
    space.check_dim(max_dim)?;
    let spin = build_spin_operators(params.n_atoms())?;
    let photon = build_photon_operators(n_max)?;
    let id_spin = SpinPhotonOperator::<f64>::identity(space.spin_dim());
    let id_fock = SpinPhotonOperator::<f64>::identity(space.fock_dim());

    let atom = spin.jz.kron(&id_fock).scale(params.delta());
    let field = id_spin.kron(&photon.number).scale(params.omega());
    let coupling = spin
        .jx
        .kron(&photon.two_photon)
        .scale(2.0 * params.g() / params.n());
    atom.try_add(&field)?.try_add(&coupling)
}

/// Z₄ parity `Π = (-1)^{j+m} e^{iπ n/2}`.
///
/// On symmetric states `⊗σ_z = (-1)^{j-m}`, so this equals
/// `(-1)^N ⊗σ_z e^{iπ a†a/2}`. The spin sign flips under `J_x` (Δm = ±1)
/// and the photon phase flips under `a†², a²` (Δn = ±2), so `[H, Π] = 0`
/// holds exactly at any cutoff.
pub fn parity_operator(n_atoms: usize, n_max: usize) -> Result<SpinPhotonOperator<Complex64>> {
    if n_atoms < 1 {
        return Err(Error::InvalidParameter("n_atoms must be at least 1".into()));
    }
    let space = HilbertSpace::new(n_atoms, n_max);
    space.check_dim(TruncationSpec::DEFAULT_MAX_DIM)?;
    const QUARTER_TURNS: [Complex64; 4] = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ];
    Ok(SpinPhotonOperator::diagonal((0..space.dim()).map(|i| {
        let (s, n) = space.decompose(i);
        let phase = QUARTER_TURNS[n % 4];
        if s % 2 == 0 {
            phase
        } else {
            -phase
        }
    })))
}

/// Photon-number parity blocks of the Fock space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParitySectors {
    pub even: Vec<usize>,
    pub odd: Vec<usize>,
}

/// `a†²` and `a²` change `n` by two, so `H` never mixes even and odd photon
/// numbers.
pub fn parity_sectors(n_max: usize) -> ParitySectors {
    let (even, odd) = (0..=n_max).partition(|n| n % 2 == 0);
    ParitySectors { even, odd }
}

/// Photon-number parity label of a block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhotonParity {
    Even,
    Odd,
}

/// Full-space indices of `spin ⊗ {photon numbers of one parity}`.
///
/// The ordering (spin-major or photon-major) is chosen to minimise the
/// bandwidth of the restricted Hamiltonian, which sets the cost of banded
/// factorisations.
pub fn sector_indices(space: &HilbertSpace, parity: PhotonParity) -> Vec<usize> {
    let sectors = parity_sectors(space.n_max);
    let photons = match parity {
        PhotonParity::Even => sectors.even,
        PhotonParity::Odd => sectors.odd,
    };
    let spins = 0..space.spin_dim();
    // Coupling links (s, n) with (s±1, n±2): spin-major bandwidth is
    // |photons| + 1, photon-major is spin_dim + 1.
    if photons.len() <= space.spin_dim() {
        spins
            .flat_map(|s| photons.iter().map(move |&n| space.index(s, n)))
            .collect()
    } else {
        photons
            .iter()
            .flat_map(|&n| spins.clone().map(move |s| space.index(s, n)))
            .collect()
    }
}
