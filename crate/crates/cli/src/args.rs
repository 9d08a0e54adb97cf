use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "tpdicke",
    version,
    about = "Two-photon Dicke model: exact diagonalisation, closed forms and finite-size scaling"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ground state at one coupling, exact diagonalisation against closed forms.
    GroundState(GroundStateArgs),
    /// Coupling sweep at fixed N.
    Sweep(SweepArgs),
    /// Finite-size data collapse against the scaling variable.
    Collapse(CollapseArgs),
    /// Run the acceptance checks and print a pass/fail table.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Units {
    /// Frequencies and energies divided by omega.
    Omega,
    /// Unscaled values.
    Raw,
}

impl std::str::FromStr for Units {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Regular {
    /// Subtract `-w1/2 - w1/(2N) - w1 g^2/(2 N^2 w^2)`.
    Constant,
    /// Subtract `-w1/(2N) - w1/(2N^2)`.
    Short,
}

impl std::str::FromStr for Regular {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct FrequencyArgs {
    /// Cavity frequency.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Scaled atomic frequency N * delta [default: 0.5].
    #[arg(long, conflicts_with = "delta")]
    pub omega1: Option<f64>,
    /// Bare atomic splitting; sets omega1 = N * delta.
    #[arg(long)]
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct TruncArgs {
    /// Initial photon cutoff [default: 16].
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Relative ground-energy change accepted between cutoffs [default: 1e-10].
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Largest cutoff tried [default: 1024].
    #[arg(long)]
    pub n_max_ceiling: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// Output directory [default: .].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Reporting units [default: omega].
    #[arg(long, value_enum)]
    pub units: Option<Units>,
    /// Flat key = value file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GroundStateArgs {
    #[command(flatten)]
    pub freq: FrequencyArgs,
    /// Number of atoms [default: 100].
    #[arg(long = "N", value_name = "N")]
    pub n_atoms: Option<usize>,
    /// Coupling strength.
    #[arg(long)]
    pub g: Option<f64>,
    #[command(flatten)]
    pub trunc: TruncArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub freq: FrequencyArgs,
    /// Number of atoms [default: 100].
    #[arg(long = "N", value_name = "N")]
    pub n_atoms: Option<usize>,
    /// First coupling; with --g-max the grid includes both ends.
    #[arg(long)]
    pub g_min: Option<f64>,
    /// Last coupling; without --g-min/--g-max the grid is open on (0, omega/2).
    #[arg(long)]
    pub g_max: Option<f64>,
    /// Number of couplings [default: 40].
    #[arg(long)]
    pub points: Option<usize>,
    #[command(flatten)]
    pub trunc: TruncArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CollapseArgs {
    /// Cavity frequency.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Scaled atomic frequency N * delta, common to all sizes [default: 0.5].
    #[arg(long)]
    pub omega1: Option<f64>,
    /// energy, jz, jy2 or all [default: all].
    #[arg(long)]
    pub quantity: Option<String>,
    /// Atom numbers, comma separated [default: 5,10,30,50,100].
    #[arg(long)]
    pub sizes: Option<String>,
    /// ed or analytic [default: ed].
    #[arg(long)]
    pub source: Option<String>,
    /// Couplings in the grid, g'^2 uniform below g_collapse [default: 60].
    #[arg(long)]
    pub points: Option<usize>,
    /// Regular energy part removed before rescaling [default: constant].
    #[arg(long, value_enum)]
    pub regular: Option<Regular>,
    /// Exit with status 1 when any spread exceeds this value.
    #[arg(long)]
    pub max_spread: Option<f64>,
    #[command(flatten)]
    pub trunc: TruncArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run only these checks, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
}
