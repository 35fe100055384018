//! Command-line definitions.

use std::path::PathBuf;

use bounce_core::ModelKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;
use crate::grid::Axis;
use crate::params::{Coord, Params};

#[derive(Debug, Parser)]
#[command(
    name = "bounce",
    version,
    about = "Entanglement and detection probability of a spin mediator scattered by two qubits",
    allow_negative_numbers = true
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Interaction model: xy (spin exchange, default) or heis (Heisenberg contact).
    #[arg(long, value_enum, global = true)]
    pub model: Option<ModelArg>,

    /// Output format for tables and reports.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    /// Shorthand for --format json.
    #[arg(long, global = true)]
    pub json: bool,

    /// Write output to PATH instead of stdout.
    #[arg(long, value_name = "PATH", global = true)]
    pub out: Option<PathBuf>,

    /// Seed for pseudo-random sampling.
    #[arg(long, default_value_t = 42, global = true)]
    pub seed: u64,
}

impl GlobalArgs {
    pub fn model_kind(&self) -> ModelKind {
        self.model.unwrap_or(ModelArg::Xy).into()
    }

    pub fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Xy,
    Heis,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Xy => ModelKind::SpinExchange,
            ModelArg::Heis => ModelKind::HeisenbergContact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    T,
    R,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Amplitudes and observables at a single point.
    Point {
        #[command(flatten)]
        params: ParamArgs,
        /// Detection side to report.
        #[arg(long, value_enum, default_value_t = SideArg::Both)]
        side: SideArg,
    },
    /// Evaluate observables on a 1D or 2D grid.
    Scan {
        /// Axis as name:start:stop:count; give once or twice.
        #[arg(long = "axis", required = true)]
        axes: Vec<Axis>,
        /// Comma-separated columns from C_t,P_t,a_t,C_r,P_r,a_r,C_opt,P_opt,sin2_opt.
        #[arg(long, value_delimiter = ',', default_value = "C_t,P_t,a_t,C_r,P_r,a_r")]
        observables: Vec<String>,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Compare bounce-truncated observables with the exact ones along an axis.
    Truncate {
        /// Bounce counts, comma-separated.
        #[arg(long = "n", value_delimiter = ',', required = true)]
        bounces: Vec<usize>,
        #[arg(long)]
        axis: Axis,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Optimal operating points.
    Optimize {
        #[command(subcommand)]
        target: OptimizeTarget,
    },
    /// Cross-check closed forms against the numerical matching solve.
    Verify {
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        /// Maximum allowed deviation.
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
    },
    /// Run a named figure recipe, or list them.
    Recipe {
        /// Recipe name; omit to list all.
        name: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum OptimizeTarget {
    /// Largest detection probability with unit concurrence.
    Popt,
    /// Best concurrence over the phase at fixed couplings.
    Report {
        #[command(flatten)]
        params: ParamArgs,
    },
}

/// Physical (gA, gB, k, d) or dimensionless (omegaA, omegaB, phase | sin2kd)
/// coordinates. The two groups are mutually exclusive.
#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// Coupling of qubit A [hbar^2 pi/(m d0)].
    #[arg(long = "gA")]
    pub g_a: Option<f64>,
    /// Coupling of qubit B [hbar^2 pi/(m d0)].
    #[arg(long = "gB")]
    pub g_b: Option<f64>,
    /// Incident momentum [pi/d0].
    #[arg(long)]
    pub k: Option<f64>,
    /// Qubit separation [d0]; defaults to 1.
    #[arg(long)]
    pub d: Option<f64>,
    /// Dimensionless coupling of A.
    #[arg(long = "omegaA")]
    pub omega_a: Option<f64>,
    /// Dimensionless coupling of B.
    #[arg(long = "omegaB")]
    pub omega_b: Option<f64>,
    /// Phase k d in radians.
    #[arg(long)]
    pub phase: Option<f64>,
    /// sin^2(k d) in [0, 1]; selects k d in [0, pi/2].
    #[arg(long = "sin2kd")]
    pub sin2kd: Option<f64>,
}

impl ParamArgs {
    pub fn to_params(&self) -> Result<Params, CliError> {
        let mut p = Params::default();
        let pairs = [
            (Coord::GA, self.g_a),
            (Coord::GB, self.g_b),
            (Coord::K, self.k),
            (Coord::D, self.d),
            (Coord::OmegaA, self.omega_a),
            (Coord::OmegaB, self.omega_b),
            (Coord::Phase, self.phase),
            (Coord::Sin2, self.sin2kd),
        ];
        for (c, v) in pairs {
            if let Some(v) = v {
                p.set(c, v)?;
            }
        }
        Ok(p)
    }
}
