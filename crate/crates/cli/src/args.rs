//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "regime",
    version,
    about = "Equilibria of a regime-change global game with propaganda and counter-propaganda"
)]
pub struct Cli {
    /// TOML file whose keys mirror the long flag names. Defaults to the
    /// file named by REGIME_CONFIG, if set.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// No-communication equilibrium for a known partisan share.
    Benchmark(BenchmarkArgs),
    /// Communication equilibrium (alpha*, theta*, x*, y*, z*).
    Equilibrium(EquilibriumArgs),
    /// Optimal effort of one side at a given regime strength.
    BestResponse(BestResponseArgs),
    /// Finite-population Monte Carlo at fixed efforts.
    Simulate(SimulateArgs),
    /// Solve over a grid of one parameter.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// Attack cost c in (0, 1). Default 0.5.
    #[arg(long)]
    pub c: Option<f64>,
    /// Signal precision. Default 1.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Opposition benefit from collapse. Default 1.
    #[arg(long = "B")]
    pub benefit: Option<f64>,
    /// Counter-propaganda cost scale. Default 1.
    #[arg(long)]
    pub psi: Option<f64>,
    /// Benefit-cost ratio; psi defaults to 1 when this is given.
    #[arg(long = "B-over-psi", conflicts_with = "benefit")]
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SimArgs {
    /// Strategic citizens attack iff their signal is at most this cutoff.
    #[arg(long = "x-hat", allow_negative_numbers = true)]
    pub x_hat: Option<f64>,
    /// Regime propaganda.
    #[arg(long)]
    pub y: Option<f64>,
    /// Opposition counter-propaganda.
    #[arg(long)]
    pub z: Option<f64>,
    /// Citizens per replication.
    #[arg(long)]
    pub n: Option<u64>,
    /// Replications.
    #[arg(long)]
    pub reps: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    pub threads: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchmarkArgs {
    /// Known partisan share in [0, 1]. Default 0.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EquilibriumArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Regime,
    Opposition,
}

#[derive(Debug, Clone, Args)]
pub struct BestResponseArgs {
    #[arg(long, value_enum)]
    pub side: Side,
    /// Regime strength. Default 0.5.
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Effective citizen cutoff. Default 0.
    #[arg(long = "x-star", allow_negative_numbers = true)]
    pub x_star: Option<f64>,
    /// Regime side only: critical share to use instead of the one implied
    /// by theta and x*.
    #[arg(long = "alpha-star")]
    pub alpha_star: Option<f64>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Regime strength. Default 0.5.
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    #[command(flatten)]
    pub sim: SimArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParameter {
    #[value(name = "alpha")]
    Alpha,
    #[value(name = "c")]
    C,
    #[value(name = "beta")]
    Beta,
    #[value(name = "B")]
    B,
    #[value(name = "psi")]
    Psi,
    #[value(name = "B_over_psi")]
    BOverPsi,
    #[value(name = "theta")]
    Theta,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Alpha => "alpha",
            SweepParameter::C => "c",
            SweepParameter::Beta => "beta",
            SweepParameter::B => "B",
            SweepParameter::Psi => "psi",
            SweepParameter::BOverPsi => "B_over_psi",
            SweepParameter::Theta => "theta",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepTarget {
    Benchmark,
    Equilibrium,
    CollapseCurve,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub parameter: SweepParameter,
    #[arg(long, allow_negative_numbers = true)]
    pub lo: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub hi: f64,
    #[arg(long, default_value_t = 11)]
    pub steps: u64,
    #[arg(long, value_enum)]
    pub target: SweepTarget,
    /// Partisan share held fixed for benchmark sweeps. Default 0.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[command(flatten)]
    pub sim: SimArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
