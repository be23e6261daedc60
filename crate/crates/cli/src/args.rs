use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub const DEFAULT_TRACE: &str = "kloosterman:s=2:normalized";

#[derive(Parser, Debug, Clone, Serialize)]
#[command(
    name = "tracelab",
    version,
    about = "Trace functions modulo a prime: twisted sums, correlations and sieve decompositions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, env = "TRACELAB_THREADS")]
    pub threads: Option<usize>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightChoice {
    Mobius,
    Tau,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Build (or load) sieve tables and summarise them.
    Tables(TablesArgs),
    /// Evaluate a trace function at every residue.
    Kloosterman(KloostermanArgs),
    /// Check the pointwise bound for Kloosterman tables.
    WeilCheck(WeilCheckArgs),
    /// Möbius- or divisor-twisted sum of a trace function.
    Twisted(TwistedArgs),
    /// Instrumented class-by-class decomposition of a twisted sum.
    Decompose(DecomposeArgs),
    /// Correlation sums, the completion identity and exceptional scans.
    Correlate(CorrelateArgs),
    /// Sum over integers with a fixed binary digit sum.
    Digits(DigitsArgs),
    /// Twisted sums over a grid of primes and exponents.
    Sweep(SweepArgs),
    /// Binary entropy values and the half-level threshold.
    Entropy(EntropyArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct LengthArgs {
    /// Summation length N.
    #[arg(long, conflicts_with = "theta")]
    pub n: Option<u64>,
    /// Exponent with N = ceil(p^theta), 0 < theta < 1.
    #[arg(long)]
    pub theta: Option<f64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TraceArgs {
    #[arg(long, default_value = DEFAULT_TRACE)]
    pub trace: String,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct WeightArgs {
    #[arg(long, value_enum, default_value_t = WeightChoice::Mobius)]
    pub weight: WeightChoice,
    /// Order of the divisor function for `--weight tau`.
    #[arg(long, default_value_t = 2)]
    pub nu: u32,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SieveArgs {
    /// Load sieve tables from this file, rebuilding and saving when it is
    /// missing or too small.
    #[arg(long)]
    pub sieve_cache: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TablesArgs {
    #[arg(long)]
    pub n: u64,
    /// Also build `tau_nu`.
    #[arg(long)]
    pub nu: Option<u32>,
    /// With `--y`, report the partition by primes in (x, y].
    #[arg(long, requires = "y")]
    pub x: Option<f64>,
    #[arg(long, requires = "x")]
    pub y: Option<f64>,
    #[command(flatten)]
    pub sieve: SieveArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct KloostermanArgs {
    #[arg(long)]
    pub p: u64,
    #[command(flatten)]
    pub trace: TraceArgs,
    /// Also evaluate Kloosterman tables by the direct recursion and report
    /// the largest deviation.
    #[arg(long)]
    pub compare_direct: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PrimeListArgs {
    /// Comma-separated primes.
    #[arg(long, value_delimiter = ',')]
    pub primes: Vec<u64>,
    /// File of primes separated by whitespace or commas; `#` starts a comment.
    #[arg(long)]
    pub primes_file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct WeilCheckArgs {
    #[arg(long)]
    pub p: Option<u64>,
    /// Check every prime 3 <= p <= this bound.
    #[arg(long)]
    pub max_p: Option<u64>,
    #[command(flatten)]
    pub list: PrimeListArgs,
    #[command(flatten)]
    pub trace: TraceArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ParamArgs {
    #[arg(long, requires = "y", conflicts_with = "auto_params")]
    pub x: Option<f64>,
    #[arg(long, requires = "x", conflicts_with = "auto_params")]
    pub y: Option<f64>,
    /// Choose (x, y) from p, epsilon and the weight.
    #[arg(long)]
    pub auto_params: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TwistedArgs {
    #[arg(long)]
    pub p: u64,
    #[command(flatten)]
    pub length: LengthArgs,
    #[command(flatten)]
    pub trace: TraceArgs,
    #[command(flatten)]
    pub weight: WeightArgs,
    #[arg(long, default_value_t = tracelab_core::sums::params::DEFAULT_EPSILON)]
    pub epsilon: f64,
    #[command(flatten)]
    pub sieve: SieveArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub p: u64,
    #[command(flatten)]
    pub length: LengthArgs,
    #[command(flatten)]
    pub trace: TraceArgs,
    #[command(flatten)]
    pub weight: WeightArgs,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = tracelab_core::sums::params::DEFAULT_EPSILON)]
    pub epsilon: f64,
    #[command(flatten)]
    pub sieve: SieveArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CorrelateArgs {
    #[arg(long)]
    pub p: u64,
    #[command(flatten)]
    pub trace: TraceArgs,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub h: i64,
    #[arg(long, default_value_t = 1)]
    pub a: u64,
    /// Second dilation of the incomplete sum `sum_{n<=N} K(an) conj(K(bn))`.
    #[arg(long, requires = "n")]
    pub b: Option<u64>,
    /// Length of the incomplete sum; also runs the completion check.
    #[arg(long)]
    pub n: Option<u64>,
    /// Scan every dilation a for large complete correlations.
    #[arg(long)]
    pub scan_exceptional: bool,
    #[arg(long, default_value_t = tracelab_core::correlation::DEFAULT_THRESHOLD)]
    pub threshold: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DigitsArgs {
    #[arg(long)]
    pub p: u64,
    #[command(flatten)]
    pub trace: TraceArgs,
    /// Number of binary digits.
    #[arg(long)]
    pub r: u32,
    /// Required digit sum.
    #[arg(long)]
    pub s: u32,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    pub list: PrimeListArgs,
    /// Comma-separated exponents theta, N = ceil(p^theta).
    #[arg(long, value_delimiter = ',', required = true)]
    pub thetas: Vec<f64>,
    #[command(flatten)]
    pub trace: TraceArgs,
    /// One or more weights, comma-separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "mobius")]
    pub weight: Vec<WeightChoice>,
    #[arg(long, default_value_t = 2)]
    pub nu: u32,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EntropyArgs {
    /// Points at which to evaluate H, comma-separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub gamma: Vec<f64>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Tables(_) => "tables",
            Command::Kloosterman(_) => "kloosterman",
            Command::WeilCheck(_) => "weil-check",
            Command::Twisted(_) => "twisted",
            Command::Decompose(_) => "decompose",
            Command::Correlate(_) => "correlate",
            Command::Digits(_) => "digits",
            Command::Sweep(_) => "sweep",
            Command::Entropy(_) => "entropy",
        }
    }
}
