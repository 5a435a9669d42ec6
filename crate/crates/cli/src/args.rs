use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rirdist::sde::{DEFAULT_EPOCH_GRID, DEFAULT_LR_GRID};

#[derive(Debug, Parser)]
#[command(
    name = "rirdist",
    version,
    about = "Synthesize room impulse responses, quality-filter them and train a speaker-distance estimator"
)]
pub struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize responses for a set of rooms.
    Generate(GenerateArgs),
    /// Compute acoustic metrics for every response in a dataset.
    Analyze(AnalyzeArgs),
    /// Accept or reject responses against per-room enrollment profiles.
    Filter(FilterArgs),
    /// Extract features from accepted responses and fit the distance estimator.
    Train(TrainArgs),
    /// Score a trained model on a feature split.
    Eval(EvalArgs),
    /// Render tables and an optional scatter plot from an evaluation.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Room ids ("1-20", "1,4,7-9") or a JSON file with a list of rooms.
    #[arg(long, default_value = "1-20")]
    pub rooms: String,
    /// Responses per room.
    #[arg(long = "n", value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Highest image-source reflection order.
    #[arg(long, default_value_t = 6)]
    pub max_order: u32,
    /// Hand-over time to the diffuse tail, ms.
    #[arg(long, default_value_t = 80.0)]
    pub crossover_ms: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Dataset directory written by `generate`.
    #[arg(long)]
    pub input: PathBuf,
    /// Where to write metrics.jsonl (defaults to the input directory).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    /// Dataset to filter.
    #[arg(long)]
    pub input: PathBuf,
    /// Dataset of enrollment responses, at least two per room.
    #[arg(long)]
    pub enrollment: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Reject sources closer than this, m.
    #[arg(long, default_value_t = 0.8)]
    pub dist_min: f64,
    /// Reject sources farther than this, m.
    #[arg(long, default_value_t = 7.1)]
    pub dist_max: f64,
    /// Reject T60 above this, s.
    #[arg(long, default_value_t = 1.8695)]
    pub t60_cutoff: f64,
    /// Relative T60 band around the room median (0.2 = ±20%).
    #[arg(long, default_value_t = 0.2)]
    pub t60_tol: f64,
    /// Largest RMS deviation from the median energy decay curve, dB.
    #[arg(long, default_value_t = 6.0)]
    pub edc_dev: f64,
    /// Largest relative deviation of the early echo count (0.5 = ±50%).
    #[arg(long, default_value_t = 0.5)]
    pub echo_dev: f64,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Dataset directory written by `generate`.
    #[arg(long)]
    pub data: PathBuf,
    /// Output directory of `filter` for the same dataset.
    #[arg(long)]
    pub filtered: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Restrict training to these room ids ("1-10").
    #[arg(long)]
    pub rooms: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Learning rates to search.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_LR_GRID)]
    pub lr_grid: Vec<f64>,
    /// Epoch counts to search.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_EPOCH_GRID)]
    pub epoch_grid: Vec<usize>,
    /// Samples per gradient step.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub batch_size: u64,
    /// Allow learning rates outside [1e-5, 1e-3] and epochs outside [5, 50].
    #[arg(long)]
    pub no_range_check: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// features.jsonl written by `train`.
    #[arg(long)]
    pub features: PathBuf,
    /// Which split to score.
    #[arg(long, default_value = "test")]
    pub split: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// eval.json written by `eval`.
    #[arg(long)]
    pub eval: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Also draw predicted against true distance as scatter.svg.
    #[arg(long)]
    pub svg: bool,
}
