//! Finite-size scaling near the critical coupling.

pub mod collapse;
pub mod fit;
pub mod scaling;
pub mod universal;

pub use collapse::{
    build_collapse, collapse_samples, collapse_spread, curves_from_samples, default_g_grid,
    CollapseCurve, CollapseOptions, CollapseResult, CollapseSample, CollapseSource, SpreadReport,
};
pub use fit::{extrapolate_limit, fit_exponent, linear_fit, power_law_fit, LinearFit, PowerLawFit};
pub use scaling::{
    fit_residual, regular_part, scaling_variable, singular_part, singular_part_with, EnergyRegular,
    Quantity,
};
pub use universal::{
    analytic_finite_size, universal_functions, universal_point, BoxRule, FiniteSizePrediction,
    QuarticWellSpec, ScalingPoint,
};
