//! `transmute`: spectral data, transmutation kernels and the unit-potential
//! example from the command line.
//!
//! Exit status is 0 on success, 1 for invalid arguments or input files and 2
//! when a numerical routine fails.

mod commands;
mod output;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use transmutation::kernels::{KernelKind, SeriesMode};
use transmutation::numerics::DEFAULT_GRID_POINTS;
use transmutation::Error;

#[derive(Debug, Parser)]
#[command(
    name = "transmute",
    version,
    about = "Transmutation kernels from Sturm-Liouville spectral data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalues, normalizing constants and asymptotic residuals as JSON.
    Spectrum(SpectrumArgs),
    /// A kernel F, G, H or Gexact on a triangle grid, as CSV (or JSON for a `.json` path).
    Kernel(KernelArgs),
    /// Applies T (kernel G or Gexact) or its inverse (kernel H) to sampled data.
    Apply(ApplyArgs),
    /// The series preimage T^-1[f] truncated at N.
    Preimage(PreimageArgs),
    /// Residuals of the kernel identities and the distributional pairing, as JSON.
    Diagnostics(DiagnosticsArgs),
    /// Error table and kernel-error profiles for q = 1.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Preset {
    /// q = 0
    Zero,
    /// q = 1
    One,
}

#[derive(Debug, Args)]
struct ProblemArgs {
    /// Built-in potential (default: zero).
    #[arg(long, value_enum, conflicts_with = "potential")]
    preset: Option<Preset>,
    /// CSV file with header `x,q` covering [0, pi].
    #[arg(long, value_name = "CSV")]
    potential: Option<PathBuf>,
    /// Boundary parameter at 0: y'(0) = h y(0).
    #[arg(long = "h", default_value_t = 0.0, allow_negative_numbers = true)]
    h: f64,
    /// Boundary parameter at pi: y'(pi) = -H y(pi).
    #[arg(long = "H", default_value_t = 0.0, allow_negative_numbers = true)]
    big_h: f64,
    /// Points of the grid used to integrate the Cauchy problems.
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    grid: usize,
}

#[derive(Debug, Args)]
struct SeriesArgs {
    /// Truncation order N.
    #[arg(long = "N", visible_alias = "nmax", default_value_t = 200)]
    order: usize,
    #[arg(long, default_value_t = SeriesMode::Accelerated)]
    mode: SeriesMode,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Highest eigenvalue index.
    #[arg(long = "nmax", visible_alias = "N", default_value_t = 100)]
    n_max: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct KernelArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(flatten)]
    series: SeriesArgs,
    #[arg(long, default_value_t = KernelKind::G)]
    which: KernelKind,
    /// Points of the output grid on [0, pi].
    #[arg(long, default_value_t = 201)]
    m: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ApplyArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(flatten)]
    series: SeriesArgs,
    /// G or Gexact applies T, H applies T^-1.
    #[arg(long, default_value_t = KernelKind::G)]
    which: KernelKind,
    /// CSV file with header `x,value` sampled on a uniform grid over [0, pi].
    #[arg(long, value_name = "CSV")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PreimageArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Truncation order N.
    #[arg(long = "N", visible_alias = "nmax", default_value_t = 100)]
    order: usize,
    /// CSV file with header `x,value` sampled on a uniform grid over [0, pi].
    #[arg(long, value_name = "CSV")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DiagnosticsArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(flatten)]
    series: SeriesArgs,
    /// Points of the kernel grids.
    #[arg(long, default_value_t = 401)]
    m: usize,
    /// Abscissae at which the residuals are reported.
    #[arg(long, value_delimiter = ',', default_values_t = [PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI])]
    x: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReproduceArgs {
    /// Output directory; created if missing.
    #[arg(long)]
    out: PathBuf,
    /// Truncation orders of the error table.
    #[arg(long = "N", value_delimiter = ',', default_values_t = [10, 100, 1000])]
    orders: Vec<usize>,
    /// Points of the x-grid for the sup norms.
    #[arg(long, default_value_t = transmutation::example::SUP_GRID_POINTS)]
    m: usize,
    /// Truncation orders of the kernel-error profiles.
    #[arg(long = "profile-N", value_delimiter = ',', default_values_t = [10, 100])]
    profile_orders: Vec<usize>,
    /// Points of the t-grid for the profiles.
    #[arg(long = "profile-m", default_value_t = 401)]
    profile_m: usize,
}

fn configure_threads() -> transmutation::Result<()> {
    let Ok(raw) = std::env::var("TRANSMUTE_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Error::Argument(format!(
            "TRANSMUTE_THREADS must be a positive integer, got '{raw}'"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Argument(format!("cannot configure thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = configure_threads().and_then(|()| commands::run(cli.command));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
