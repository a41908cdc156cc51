//! `loggap`: inspect, fill and benchmark gaps in well-log curves.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use loggap_core::ErrorKind;

#[derive(Debug, Parser)]
#[command(name = "loggap", version, about = "Fill gaps in well-log curves")]
struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Report depth range and gap statistics per curve.
    Inspect(InspectArgs),
    /// Fill the gaps of the target curve and write the result.
    Impute(ImputeArgs),
    /// Score every method on artificially removed stretches.
    Benchmark(BenchmarkArgs),
    /// Write a synthetic five-curve well.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
struct InspectArgs {
    /// LAS or CSV files.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,

    /// Pool totals over this curve only.
    #[arg(long)]
    curve: Option<String>,

    /// Print JSON instead of a table.
    #[arg(long)]
    json: bool,
}

/// Flags shared by `impute` and `benchmark`.
#[derive(Debug, Clone, Args)]
struct ModelArgs {
    /// Curve to fill.
    #[arg(long, default_value = "GR")]
    target: String,

    /// Feature configuration as JSON; missing keys take their defaults.
    #[arg(long, value_name = "FILE")]
    features: Option<PathBuf>,

    /// Lowest frequency bin kept by the SP detrend.
    #[arg(long, default_value_t = 5)]
    sp_cutoff: usize,

    #[arg(long, default_value_t = 100)]
    epochs: usize,

    #[arg(long, default_value_t = 1e-3)]
    lr: f64,

    #[arg(long, default_value_t = 64)]
    batch_size: usize,

    /// Observed samples per side used for the shift correction.
    #[arg(long, default_value_t = 10)]
    anchor_k: usize,

    #[arg(long, env = "LOGGAP_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct ImputeArgs {
    input: PathBuf,

    /// Output file; `.csv` writes CSV, anything else LAS.
    #[arg(short, long)]
    out: PathBuf,

    /// auto, linear, cubic, nn or nn_shift.
    #[arg(long, default_value = "auto")]
    policy: String,

    /// Longest gap that `auto` fills linearly.
    #[arg(long, default_value_t = 5)]
    threshold: usize,

    /// Save the trained network here as JSON.
    #[arg(long, value_name = "FILE")]
    model: Option<PathBuf>,

    #[arg(long)]
    json: bool,

    #[command(flatten)]
    model_args: ModelArgs,
}

#[derive(Debug, Args)]
struct BenchmarkArgs {
    /// Well to benchmark on; omit with --synth.
    #[arg(required_unless_present = "synth", conflicts_with = "synth")]
    input: Option<PathBuf>,

    /// Use the built-in synthetic well.
    #[arg(long)]
    synth: bool,

    #[arg(long, default_value_t = 20_000)]
    synth_length: usize,

    #[arg(long, default_value_t = 42)]
    synth_seed: u64,

    /// Writes PREFIX.csv and PREFIX.svg.
    #[arg(short, long, value_name = "PREFIX")]
    out: PathBuf,

    #[arg(long, value_delimiter = ',', default_values_t = loggap_core::eval::DEFAULT_LENGTHS)]
    lengths: Vec<usize>,

    #[arg(long, default_value_t = 20)]
    trials: usize,

    #[arg(long, value_delimiter = ',', default_value = "linear,cubic,nn,nn_shift")]
    methods: Vec<String>,

    /// Run length batches one after another instead of on the thread pool.
    #[arg(long)]
    serial: bool,

    #[arg(long, default_value_t = 800)]
    width: u32,

    #[arg(long, default_value_t = 500)]
    height: u32,

    #[arg(long)]
    json: bool,

    #[command(flatten)]
    model_args: ModelArgs,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(short, long)]
    out: PathBuf,

    #[arg(long, env = "LOGGAP_SEED", default_value_t = 42)]
    seed: u64,

    #[arg(long, default_value_t = 20_000)]
    length: usize,

    /// White noise in standardized units.
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
}

/// Bad flag values detected after parsing.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return EXIT_USAGE;
        }
        if let Some(core) = cause.downcast_ref::<loggap_core::Error>() {
            return match core.kind() {
                ErrorKind::Config => EXIT_USAGE,
                ErrorKind::Data => EXIT_DATA,
                ErrorKind::Numeric => EXIT_NUMERIC,
            };
        }
    }
    EXIT_DATA
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();

    let result = match cli.command {
        Command::Inspect(a) => commands::inspect(a),
        Command::Impute(a) => commands::impute(a),
        Command::Benchmark(a) => commands::benchmark(a),
        Command::Synth(a) => commands::synth(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
