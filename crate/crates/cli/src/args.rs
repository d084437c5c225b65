use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use emskin::optimizer::CrossoverKind;

#[derive(Debug, Parser)]
#[command(name = "emskin", version, about = "Design modular reflecting EM skins for mm-wave coverage")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the NSGA-II design loop and export the Pareto front.
    Optimize(OptimizeArgs),
    /// Coverage statistics of a given layout.
    Evaluate(EvaluateArgs),
    /// Sample the reflected power of a layout over a ground region.
    Map(MapArgs),
    /// Steering check of a single tile on a sphere.
    ValidateSingleTile(SingleTileArgs),
    /// Repeat the optimization over several seeds and summarize the spread.
    Batch(BatchArgs),
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    /// Overrides the scenario's sinc argument convention (1.0 or 0.5).
    #[arg(long)]
    pub sinc_arg_scale: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Crossover {
    Uniform,
    OnePoint,
    TwoPoint,
}

impl From<Crossover> for CrossoverKind {
    fn from(c: Crossover) -> Self {
        match c {
            Crossover::Uniform => CrossoverKind::Uniform,
            Crossover::OnePoint => CrossoverKind::OnePoint,
            Crossover::TwoPoint => CrossoverKind::TwoPoint,
        }
    }
}

#[derive(Debug, Args)]
pub struct GaArgs {
    /// Iterations I (default 1000).
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Population size P (default 2N).
    #[arg(long)]
    pub population: Option<usize>,
    /// Crossover probability (default 1.0).
    #[arg(long)]
    pub crossover_rate: Option<f64>,
    /// Per-bit mutation probability (default 1/N).
    #[arg(long)]
    pub mutation_rate: Option<f64>,
    #[arg(long, value_enum, default_value_t = Crossover::Uniform)]
    pub crossover: Crossover,
    /// Also snapshot the population every this many iterations.
    #[arg(long, default_value_t = 0)]
    pub snapshot_every: usize,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub ga: GaArgs,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct LayoutArgs {
    /// Row-major bit string, e.g. 0011...
    #[arg(long)]
    pub layout: Option<String>,
    /// 1-based tile indices, e.g. "3,4,5" or "{3, 4, 5}".
    #[arg(long)]
    pub tiles: Option<String>,
    /// Layout file with a `bits = ` or `tiles = ` line.
    #[arg(long)]
    pub layout_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub layout: LayoutArgs,
    /// Writes coverage_<name>.txt here when given.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "layout")]
    pub name: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegionKind {
    /// Square centered on the area of interest.
    Around,
    /// The area of interest itself.
    Aoi,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[arg(long, value_enum, default_value_t = RegionKind::Around)]
    pub region: RegionKind,
    /// Side of the square region, meters.
    #[arg(long, default_value_t = 200.0)]
    pub size: f64,
    /// Region center "x,y".
    #[arg(long, value_parser = parse_pair::<f64>)]
    pub center: Option<(f64, f64)>,
    /// Azimuth of the first grid axis, degrees from +x.
    #[arg(long)]
    pub azimuth: Option<f64>,
    /// Region extent "u,v" in meters.
    #[arg(long, value_parser = parse_pair::<f64>)]
    pub extent: Option<(f64, f64)>,
    /// Cells per axis "nu,nv".
    #[arg(long, value_parser = parse_pair::<usize>)]
    pub cells: Option<(usize, usize)>,
    /// Sampling height, meters.
    #[arg(long)]
    pub height: Option<f64>,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub layout: LayoutArgs,
    #[command(flatten)]
    pub region: RegionArgs,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, default_value = "layout")]
    pub name: String,
}

#[derive(Debug, Args)]
pub struct SingleTileArgs {
    #[arg(long, default_value_t = 27e9)]
    pub frequency: f64,
    /// Tile side in wavelengths.
    #[arg(long, default_value_t = 25.0)]
    pub side_wavelengths: f64,
    #[arg(long, default_value_t = 100.0)]
    pub distance: f64,
    #[arg(long, default_value_t = 40.0, allow_hyphen_values = true)]
    pub steer_theta: f64,
    #[arg(long, default_value_t = -20.0, allow_hyphen_values = true)]
    pub steer_phi: f64,
    #[arg(long, default_value_t = 5.0)]
    pub radius: f64,
    /// Coarse scan step, degrees.
    #[arg(long, default_value_t = 0.25)]
    pub step: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sinc_arg_scale: f64,
    /// Writes validation.txt here when given.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub ga: GaArgs,
    /// Base seed; run k uses seed + k.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 50)]
    pub seeds: usize,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

fn parse_pair<T: std::str::FromStr>(s: &str) -> Result<(T, T), String>
where
    T::Err: std::fmt::Display,
{
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected two comma-separated values, got {s:?}"))?;
    let a = a.trim().parse::<T>().map_err(|e| e.to_string())?;
    let b = b.trim().parse::<T>().map_err(|e| e.to_string())?;
    Ok((a, b))
}
