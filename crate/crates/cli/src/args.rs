use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "cpfluct",
    version,
    about = "Casimir-Polder mean force and time-averaged force fluctuations near conducting walls"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mean force for one wall or two parallel walls.
    Force(ForceArgs),
    /// Force fluctuation for a finite measurement time.
    Fluct(FluctArgs),
    /// Single-wall sweep over distance or measurement time.
    Scan(ScanArgs),
    /// Measurement time at which the single-wall relative fluctuation is one.
    Crossover(CrossoverArgs),
    /// Atomic-beam observability estimate between two walls.
    Experiment(ExperimentArgs),
    /// Compare the closed forms against the spectral oracles.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
#[command(group(ArgGroup::new("polarizability").args(["alpha", "alpha_si", "species"])))]
pub struct AtomArgs {
    /// Static polarizability as a volume (Gaussian convention), m³.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Static polarizability in SI, C·m²/V.
    #[arg(long)]
    pub alpha_si: Option<f64>,
    /// Species config file (JSON).
    #[arg(long, requires = "species")]
    pub config: Option<PathBuf>,
    /// Species label in the config file.
    #[arg(long, requires = "config")]
    pub species: Option<String>,
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("geometry").args(["single", "two_walls"]).required(true)))]
pub struct GeometryArgs {
    /// Atom facing a single wall.
    #[arg(long)]
    pub single: bool,
    /// Atom between two parallel walls.
    #[arg(long)]
    pub two_walls: bool,
    /// Atom-wall distance, m.
    #[arg(long, required_if_eq("single", "true"))]
    pub distance: Option<f64>,
    /// Wall gap, m.
    #[arg(long, required_if_eq("two_walls", "true"))]
    pub gap: Option<f64>,
    /// Offset from the midplane, m.
    #[arg(long, required_if_eq("two_walls", "true"), allow_hyphen_values = true)]
    pub offset: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ForceArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[command(flatten)]
    pub atom: AtomArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FluctArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    /// Measurement time T, s.
    #[arg(long)]
    pub time: f64,
    #[command(flatten)]
    pub atom: AtomArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    Distance,
    Time,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    /// Swept parameter.
    #[arg(long, value_enum)]
    pub param: SweepParam,
    #[arg(long)]
    pub from: f64,
    #[arg(long)]
    pub to: f64,
    #[arg(long)]
    pub points: usize,
    #[arg(long, value_enum, default_value = "log")]
    pub spacing: Spacing,
    /// Fixed distance when sweeping time, m.
    #[arg(long, required_if_eq("param", "time"))]
    pub distance: Option<f64>,
    /// Fixed measurement time when sweeping distance, s.
    #[arg(long, required_if_eq("param", "distance"))]
    pub time: Option<f64>,
    #[command(flatten)]
    pub atom: AtomArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CrossoverArgs {
    /// Atom-wall distance, m.
    #[arg(long)]
    pub distance: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    /// Length of the cavity traversed by the beam, m.
    #[arg(long)]
    pub cavity_length: f64,
    /// Wall gap, m.
    #[arg(long)]
    pub gap: f64,
    /// Mean atomic speed, m/s.
    #[arg(long, conflicts_with_all = ["mass", "temperature"])]
    pub speed: Option<f64>,
    /// Atomic mass, kg (or taken from the species file).
    #[arg(long)]
    pub mass: Option<f64>,
    /// Oven temperature, K.
    #[arg(long)]
    pub temperature: Option<f64>,
    /// Number of offsets in the sweep.
    #[arg(long, default_value_t = 9)]
    pub points: usize,
    #[command(flatten)]
    pub atom: AtomArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    MeanEnergy,
    MeanForce,
    Variance,
    TwoWall,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    /// Relative tolerance for every case (defaults: 0.01 mean, 0.02 variance).
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}
