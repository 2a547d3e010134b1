use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ces_duality::eigensolver::Grid;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "ces-dual", version, about = "Spectra, duality checks and verification reports")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytic and numeric levels of the coth potential.
    SpectrumEs(EsArgs),
    /// Levels of the CES potential from the cubic, against the numeric oracle.
    SpectrumCes(CesArgs),
    /// Duality exchange and Schwarzian reports for one ES level.
    DualityCheck(DualityArgs),
    /// Analytic and numeric CES eigenfunction on the grid.
    ExportWf(ExportArgs),
    /// Every claim at default settings.
    VerifyAll(OutputArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub grid_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub grid_max: Option<f64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(100..))]
    pub grid_points: Option<u64>,
}

impl GridArgs {
    /// `default` with any overridden field replaced.
    pub fn resolve(&self, default: Grid) -> Result<Grid, CliError> {
        let points = self.grid_points.map_or(default.n_points(), |p| p as usize);
        Grid::new(
            self.grid_min.unwrap_or(default.q_min()),
            self.grid_max.unwrap_or(default.q_max()),
            points,
        )
        .map_err(|e| CliError::Parameters(e.to_string()))
    }
}

#[derive(Debug, Clone, Args)]
pub struct EsArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CesArgs {
    #[arg(long = "A", allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long = "B", allow_negative_numbers = true)]
    pub b: f64,
    /// Highest level index to examine.
    #[arg(long, default_value_t = 3)]
    pub n_max: usize,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DualityArgs {
    #[arg(long, default_value_t = 1.5, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    /// Overrides apply to the y-grid of the CES problem.
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ExportArgs {
    #[arg(long = "A", allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long = "B", allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
