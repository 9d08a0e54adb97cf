//! Two-photon Dicke model: Hamiltonian construction, exact diagonalisation,
//! effective-theory closed forms and finite-size scaling.
//!
//! ```
//! use tpdicke_core::{converge_cutoff, ModelParams, TruncationSpec};
//!
//! let p = ModelParams::from_delta(1.0, 0.1, 0.0, 4).unwrap();
//! let sol = converge_cutoff(&p, &TruncationSpec::default()).unwrap();
//! assert_eq!(sol.ground_energy(), -0.2);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod effective;
pub mod error;
pub mod exact_diag;
pub mod fss;
pub mod linalg;
pub mod model;
pub mod operator;
pub mod params;

pub use effective::{
    critical_couplings, jz_thermo, normal_phase, phase_result, superradiant_constants,
    superradiant_phase, CriticalPoints, NormalPhaseResult, PhaseResult, RadicalForm,
    SuperradiantConstants, SuperradiantResult,
};
pub use error::{Error, Result};
pub use exact_diag::{
    converge_cutoff, converge_cutoff_with, lowest_eigenpairs, sweep, GroundStateSolution,
    SolverMethod, SolverOptions, SweepRow,
};
pub use fss::{CollapseSource, EnergyRegular, Quantity, QuarticWellSpec, ScalingPoint};
pub use model::{assemble_hamiltonian, parity_operator, HilbertSpace, PhotonParity};
pub use operator::SpinPhotonOperator;
pub use params::{ModelParams, TruncationSpec};
