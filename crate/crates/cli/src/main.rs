//! `trimatch`: generate instances, validate inputs, match lanes, benchmark.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use trimatch_core::{Algorithm, MileageCap};

#[derive(Parser, Debug)]
#[command(name = "trimatch", version, about = "Triangular full-truckload transport matching")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a seeded synthetic instance (bases.csv, lanes.csv).
    Gen(GenArgs),
    /// Check metric axioms and lane ingestion.
    Validate(ValidateArgs),
    /// List feasible triangles for one client lane.
    Match(MatchArgs),
    /// Time backends over sampled client lanes and a grid of rates.
    Bench(BenchArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProviderArg {
    Greatcircle,
    Matrix,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgoArg {
    Brute,
    Quad,
    Pruned,
    Topk,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Brute => Algorithm::Brute,
            AlgoArg::Quad => Algorithm::Quad,
            AlgoArg::Pruned => Algorithm::Pruned,
            AlgoArg::Topk => Algorithm::TopK,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormatArg {
    Jsonl,
    Csv,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// Number of bases.
    #[arg(long)]
    pub bases_count: usize,
    /// Number of lanes [default: 3.5 per base].
    #[arg(long)]
    pub lanes_count: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct InputArgs {
    #[arg(long)]
    pub bases: PathBuf,
    #[arg(long)]
    pub lanes: Option<PathBuf>,
    /// Distance matrix in km; selects the matrix provider.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub provider: Option<ProviderArg>,
    /// Continue despite metric-axiom violations.
    #[arg(long)]
    pub force: bool,
}

#[derive(Args, Debug)]
pub struct CapArgs {
    /// Mileage cap in km.
    #[arg(long, conflicts_with = "u_factor")]
    pub u_km: Option<f64>,
    /// Mileage cap as a multiple of the client lane's distance.
    #[arg(long)]
    pub u_factor: Option<f64>,
}

impl CapArgs {
    pub fn cap(&self) -> MileageCap {
        match (self.u_km, self.u_factor) {
            (Some(km), _) => MileageCap::Km(km),
            (None, Some(f)) => MileageCap::Factor(f),
            (None, None) => MileageCap::default(),
        }
    }
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Random pairs/triples to check.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct MatchArgs {
    /// Id of the client lane.
    pub lane_id: String,
    #[command(flatten)]
    pub input: InputArgs,
    /// Minimum occupied vehicle rate, in (0, 1].
    #[arg(long = "l", default_value_t = 0.9)]
    pub ell: f64,
    #[command(flatten)]
    pub cap: CapArgs,
    /// Keep only the k best; implies --algo topk.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum)]
    pub algo: Option<AlgoArg>,
    #[arg(long, value_enum, default_value = "jsonl")]
    pub format: FormatArg,
    /// Output file [default: stdout].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Add Shapley savings shares (km) per lane.
    #[arg(long)]
    pub shapley: bool,
    /// Break top-k ties at the cut by lane id.
    #[arg(long)]
    pub deterministic: bool,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Rate grid.
    #[arg(long = "l", value_delimiter = ',', default_values_t = trimatch_core::bench::DEFAULT_ELLS)]
    pub ells: Vec<f64>,
    #[command(flatten)]
    pub cap: CapArgs,
    /// k for the top-k backend.
    #[arg(long, default_value_t = 20)]
    pub k: usize,
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["pruned", "topk"])]
    pub algo: Vec<AlgoArg>,
    #[arg(long, default_value_t = 1000)]
    pub queries: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Per-query rows [default: not written].
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "jsonl")]
    pub format: FormatArg,
    #[arg(long)]
    pub deterministic: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Validate(a) => commands::validate(a),
        Command::Match(a) => commands::run_match(a),
        Command::Bench(a) => commands::bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<commands::ValidationFailed>() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

/// A closed stdout (e.g. piping into `head`) is not an error.
fn broken_pipe(e: &anyhow::Error) -> bool {
    let is_pipe = |io: &std::io::Error| io.kind() == std::io::ErrorKind::BrokenPipe;
    e.chain().any(|c| match c.downcast_ref::<trimatch_core::Error>() {
        Some(trimatch_core::Error::Io(io)) => is_pipe(io),
        _ => c.downcast_ref::<std::io::Error>().is_some_and(is_pipe),
    })
}
