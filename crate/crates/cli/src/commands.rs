use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use log::{info, warn};
use serde::Serialize;

use loggap_core::eval::{
    render_report, run_benchmark, synthesize_well, BenchmarkConfig, EvalReport, SvgOptions, SyntheticConfig,
};
use loggap_core::features::FeatureConfig;
use loggap_core::models::{impute as impute_well, GapOutcome, ImputeConfig, Method, Policy, TrainConfig};
use loggap_core::preprocess::{DetrendConfig, PreprocessConfig};
use loggap_core::well_io::{
    pooled_gap_stats, read_well, summarize_well, write_well, Format, GapSpec, GapStats, WellLog, WellSummary,
};

use crate::{BenchmarkArgs, ImputeArgs, InspectArgs, ModelArgs, SynthArgs, UsageError};

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    emit(&(serde_json::to_string_pretty(value)? + "\n"))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

#[derive(Serialize)]
struct InspectReport {
    wells: Vec<WellSummary>,
    curve: Option<String>,
    totals: GapStats,
}

pub fn inspect(args: InspectArgs) -> Result<()> {
    let wells: Vec<WellLog> = args.inputs.iter().map(|p| read_well(p)).collect::<Result<_, _>>()?;
    if let Some(m) = &args.curve {
        if !wells.iter().any(|w| w.curve(m).is_ok()) {
            return Err(usage(format!("no input has a curve named {m}")));
        }
    }
    let report = InspectReport {
        wells: wells.iter().map(summarize_well).collect(),
        curve: args.curve.clone(),
        totals: pooled_gap_stats(&wells, args.curve.as_deref()),
    };
    if args.json {
        return print_json(&report);
    }
    let mut text = String::new();
    for (path, w) in args.inputs.iter().zip(&report.wells) {
        let _ = writeln!(
            text,
            "{} ({}): {} rows, depth {} to {} step {}",
            path.display(),
            if w.well_id.is_empty() { "unnamed" } else { &w.well_id },
            w.rows,
            w.depth_start,
            w.depth_stop,
            w.step
        );
        for c in &w.curves {
            let _ = writeln!(
                text,
                "  {:<8} {:>6} gaps  max run {:>5}  mean run {:>7.2}",
                c.mnemonic, c.stats.gap_count, c.stats.max_run, c.stats.mean_run
            );
        }
    }
    let t = &report.totals;
    let _ = writeln!(
        text,
        "total{}: {} gaps, max run {}, mean run {:.2}",
        args.curve.as_deref().map(|c| format!(" ({c})")).unwrap_or_default(),
        t.gap_count,
        t.max_run,
        t.mean_run
    );
    emit(&text)
}

fn impute_config(args: &ModelArgs, policy: Policy, threshold: usize) -> Result<ImputeConfig> {
    let mut features = match &args.features {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str::<FeatureConfig>(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => FeatureConfig::default(),
    };
    features.target = args.target.clone();
    features.validate()?;
    let train = TrainConfig {
        learning_rate: args.lr,
        epochs: args.epochs,
        batch_size: args.batch_size,
        seed: args.seed,
        ..TrainConfig::default()
    };
    train.validate()?;
    if args.anchor_k == 0 {
        return Err(usage("--anchor-k must be >= 1"));
    }
    Ok(ImputeConfig {
        policy,
        threshold,
        anchor_k: args.anchor_k,
        features,
        preprocess: PreprocessConfig {
            detrend_config: DetrendConfig { cutoff: args.sp_cutoff },
            ..PreprocessConfig::default()
        },
        train,
    })
}

#[derive(Serialize)]
struct GapRecord {
    start: usize,
    length: usize,
    depth: f64,
    method: Method,
    shift: f64,
}

#[derive(Serialize)]
struct UnfilledRecord {
    start: usize,
    length: usize,
    depth: f64,
}

#[derive(Serialize)]
struct ImputeSummary {
    well_id: String,
    target: String,
    policy: String,
    output: PathBuf,
    trained: bool,
    gaps: Vec<GapRecord>,
    unanchored: Vec<UnfilledRecord>,
}

fn copy_through(input: &Path, out: &Path, well: &WellLog) -> Result<()> {
    if Format::from_path(input) == Format::from_path(out) {
        fs::copy(input, out).with_context(|| format!("copying to {}", out.display()))?;
        Ok(())
    } else {
        Ok(write_well(out, well)?)
    }
}

pub fn impute(args: ImputeArgs) -> Result<()> {
    let policy: Policy = args.policy.parse().map_err(|_| {
        usage(format!(
            "unknown policy {:?}; expected auto, linear, cubic, nn or nn_shift",
            args.policy
        ))
    })?;
    let config = impute_config(&args.model_args, policy, args.threshold)?;
    let well = read_well(&args.input)?;
    let target = well.curve(&config.features.target)?;
    let n = well.len();

    let depth = |g: &GapSpec| well.depths()[g.start];
    let summary_of = |per_gap: &[GapOutcome], unanchored: &[GapSpec], trained: bool| ImputeSummary {
        well_id: well.well_id.clone(),
        target: config.features.target.clone(),
        policy: policy.to_string(),
        output: args.out.clone(),
        trained,
        gaps: per_gap
            .iter()
            .map(|o| GapRecord {
                start: o.gap.start,
                length: o.gap.length,
                depth: depth(&o.gap),
                method: o.method,
                shift: o.shift,
            })
            .collect(),
        unanchored: unanchored
            .iter()
            .map(|g| UnfilledRecord {
                start: g.start,
                length: g.length,
                depth: depth(g),
            })
            .collect(),
    };

    let gaps = loggap_core::well_io::detect_gaps(target);
    let summary = if gaps.iter().all(|g| !g.is_anchored(n)) {
        warn!(
            "{} has no anchored gaps in {}; copying input unchanged",
            args.input.display(),
            config.features.target
        );
        copy_through(&args.input, &args.out, &well)?;
        summary_of(&[], &gaps, false)
    } else {
        let result = impute_well(&well, &config)?;
        let mut filled = well.clone();
        filled.set_curve(result.filled_curve.clone())?;
        write_well(&args.out, &filled)?;
        if let Some(path) = &args.model {
            match &result.model {
                Some(m) => write_text(path, &m.to_json())?,
                None => warn!("no network was trained; {} not written", path.display()),
            }
        }
        summary_of(&result.per_gap, &result.unanchored, result.model.is_some())
    };

    if args.json {
        return print_json(&summary);
    }
    let mut text = String::new();
    for g in &summary.gaps {
        let _ = writeln!(
            text,
            "gap at {:>10.3} ({:>5} samples): {:<8} shift {:+.4}",
            g.depth, g.length, g.method, g.shift
        );
    }
    for g in &summary.unanchored {
        let _ = writeln!(
            text,
            "gap at {:>10.3} ({:>5} samples): left missing, touches the end of the log",
            g.depth, g.length
        );
    }
    let _ = writeln!(text, "wrote {}", args.out.display());
    emit(&text)
}

fn table(report: &EvalReport) -> String {
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{:<10} {:>6} {:>10} {:>10} {:>6}",
        "method", "length", "mean", "std", "trials"
    );
    for e in &report.entries {
        let _ = writeln!(
            text,
            "{:<10} {:>6} {:>10.5} {:>10.5} {:>6}",
            e.method, e.gap_length, e.mean_score, e.std_score, e.trial_count
        );
    }
    text
}

#[derive(Serialize)]
struct BenchmarkSummary<'a> {
    csv: PathBuf,
    svg: PathBuf,
    report: &'a EvalReport,
}

fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_os_string();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

pub fn benchmark(args: BenchmarkArgs) -> Result<()> {
    let methods = args
        .methods
        .iter()
        .map(|m| m.parse::<Method>().map_err(|_| usage(format!("unknown method {m:?}"))))
        .collect::<Result<Vec<_>>>()?;
    if args.trials == 0 || args.lengths.is_empty() || args.lengths.contains(&0) {
        return Err(usage("need --trials >= 1 and positive --lengths"));
    }
    let impute = impute_config(&args.model_args, Policy::Auto, 5)?;
    let well = if args.synth {
        synthesize_well(&SyntheticConfig {
            length: args.synth_length,
            seed: args.synth_seed,
            ..SyntheticConfig::default()
        })?
    } else {
        read_well(args.input.as_deref().expect("clap requires input without --synth"))?
    };
    info!("benchmarking {} ({} rows)", well.well_id, well.len());
    let config = BenchmarkConfig {
        methods,
        lengths: args.lengths.clone(),
        trials: args.trials,
        seed: args.model_args.seed,
        impute,
        parallel: !args.serial,
    };
    let report = run_benchmark(&well, &config)?;
    let rendered = render_report(
        &report,
        SvgOptions {
            width: args.width,
            height: args.height,
        },
    )?;
    let csv = with_suffix(&args.out, "csv");
    let svg = with_suffix(&args.out, "svg");
    write_text(&csv, &rendered.csv)?;
    write_text(&svg, &rendered.svg)?;
    if args.json {
        return print_json(&BenchmarkSummary {
            csv,
            svg,
            report: &report,
        });
    }
    let mut text = table(&report);
    let _ = writeln!(text, "wrote {} and {}", csv.display(), svg.display());
    emit(&text)
}

pub fn synth(args: SynthArgs) -> Result<()> {
    let config = SyntheticConfig {
        length: args.length,
        noise_std: args.noise,
        seed: args.seed,
        ..SyntheticConfig::default()
    };
    let well = synthesize_well(&config).map_err(|e| usage(e.to_string()))?;
    write_well(&args.out, &well)?;
    emit(&format!("wrote {} ({} rows)\n", args.out.display(), well.len()))
}
