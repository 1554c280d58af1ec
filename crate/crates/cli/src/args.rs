use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Point designs in high-dimensional boxes and Monte Carlo measures of their
/// covering quality.
#[derive(Debug, Parser)]
#[command(name = "hypercover", version)]
pub struct Cli {
    /// Worker threads (default: logical cores). Output does not depend on it.
    #[arg(long, global = true, env = "HYPERCOVER_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a design and write it as CSV.
    Design(DesignArgs),
    /// Estimate the covered fraction F(r) at one radius (JSON).
    Coverage(CoverageArgs),
    /// Estimate F(r) on a radius grid (CSV: r,F_hat,ci_low,ci_high).
    Cdf(CdfArgs),
    /// Estimate the weak-covering radius r_{1-gamma} (JSON).
    Quantile(QuantileArgs),
    /// Quantization errors theta_p for several orders p (JSON).
    Quantize(QuantizeArgs),
    /// Improve a design with Lloyd iterations on a fixed sample.
    Lloyd(LloydArgs),
    /// Asymptotic radius for target coverage of an i.i.d. uniform design (JSON).
    Asy(AsyArgs),
    /// Coverage at the asymptotic radius across dimensions.
    Fig1(Fig1Args),
    /// Estimated cdf against its asymptotic approximation.
    Fig2(Fig2Args),
    /// Coverage of [-1,1]^d by uniform designs in [-delta,delta]^d.
    Fig3(Fig3Args),
    /// Weak covering by the half-fraction factorial design.
    Fig4(Fig4Args),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file (default: standard output). A run manifest is written
    /// next to it as <output>.manifest.json.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    /// uniform_delta | factorial_half | grid_midpoint_1d | paper_1d
    /// (aliases: uniform, factorial, midpoint).
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub n: Option<usize>,
    /// Half-width of the sampling cube for uniform_delta.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Required for uniform_delta.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Emit an x1,...,xd header line.
    #[arg(long)]
    pub header: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Design CSV file.
    #[arg(long)]
    pub design: PathBuf,
    /// Domain: "lo,hi" for the cube [lo,hi]^d, or a CSV file of per-axis
    /// lower,upper rows.
    #[arg(long = "box", allow_hyphen_values = true)]
    pub domain: String,
    /// Monte Carlo sample size.
    #[arg(long = "N", default_value_t = 1_000_000)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CoverageArgs {
    #[command(flatten)]
    pub sample: SampleArgs,
    #[arg(long)]
    pub r: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CdfArgs {
    #[command(flatten)]
    pub sample: SampleArgs,
    #[arg(long, default_value_t = 0.0)]
    pub rmin: f64,
    /// Default: the box diameter.
    #[arg(long)]
    pub rmax: Option<f64>,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct QuantileArgs {
    #[command(flatten)]
    pub sample: SampleArgs,
    #[arg(long)]
    pub gamma: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct QuantizeArgs {
    #[command(flatten)]
    pub sample: SampleArgs,
    /// Comma-separated orders.
    #[arg(long = "p", value_delimiter = ',', default_value = "1,2")]
    pub orders: Vec<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LloydArgs {
    #[command(flatten)]
    pub sample: SampleArgs,
    #[arg(long, default_value_t = 20)]
    pub iters: usize,
    /// Objective trace CSV (default: <output>.trace.csv when --output is set).
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct AsyArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 0.9)]
    pub target: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FigOutput {
    /// Write rows as a JSON array instead of CSV.
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct Fig1Args {
    #[arg(long, value_delimiter = ',', default_value = "1,2,5,10,20,50")]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 0.9)]
    pub target: f64,
    #[arg(long = "N", default_value_t = 1_000_000)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub replicates: usize,
    #[command(flatten)]
    pub fig: FigOutput,
}

#[derive(Debug, Args)]
pub struct Fig2Args {
    #[arg(long, default_value_t = 20)]
    pub d: usize,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub rmin: f64,
    #[arg(long, default_value_t = 2.0)]
    pub rmax: f64,
    #[arg(long, default_value_t = 41)]
    pub steps: usize,
    #[arg(long = "N", default_value_t = 1_000_000)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub fig: FigOutput,
}

#[derive(Debug, Args)]
pub struct Fig3Args {
    #[arg(long, default_value_t = 50)]
    pub d: usize,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Comma-separated delta grid (default 0.1, 0.15, ..., 1).
    #[arg(long, value_delimiter = ',')]
    pub deltas: Option<Vec<f64>>,
    /// Fixed radius. Without it, r is calibrated so the best delta reaches --target.
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long, default_value_t = 0.9)]
    pub target: f64,
    #[arg(long = "N", default_value_t = 1_000_000)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
    /// Also write the calibration summary here (JSON).
    #[arg(long)]
    pub summary: Option<PathBuf>,
    #[command(flatten)]
    pub fig: FigOutput,
}

#[derive(Debug, Args)]
pub struct Fig4Args {
    #[arg(long, default_value_t = 10)]
    pub d: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.01,0.001")]
    pub gammas: Vec<f64>,
    #[arg(long = "N", default_value_t = 10_000_000)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.0)]
    pub rmin: f64,
    /// Default: the exact covering radius.
    #[arg(long)]
    pub rmax: Option<f64>,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    /// Also write the quantile summary here (JSON).
    #[arg(long)]
    pub summary: Option<PathBuf>,
    #[command(flatten)]
    pub fig: FigOutput,
}
