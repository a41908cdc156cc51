use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::inject::{inject_gaps, mask_cases, EvalCase};
use super::metric::MetricReference;
use crate::error::{Error, Result};
use crate::features::{prepare_features, FeatureMatrix};
use crate::models::{fill_gap, ImputeConfig, Method, TrainConfig, TrainedModel};
use crate::stats::{derive_seed, mean, sample_std};
use crate::well_io::WellLog;

pub const METRIC_NAME: &str = "nmae_p99_p1";

/// Gap lengths swept by default, up to the longest real gap seen in field data.
pub const DEFAULT_LENGTHS: [usize; 9] = [5, 10, 25, 50, 100, 150, 200, 250, 300];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub method: Method,
    pub gap_length: usize,
    pub mean_score: f64,
    pub std_score: f64,
    pub trial_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub metric_name: String,
    pub entries: Vec<ReportEntry>,
}

impl EvalReport {
    pub fn entry(&self, method: Method, gap_length: usize) -> Option<&ReportEntry> {
        self.entries
            .iter()
            .find(|e| e.method == method && e.gap_length == gap_length)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    pub methods: Vec<Method>,
    pub lengths: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Target, feature, preprocessing, training and anchor settings.
    pub impute: ImputeConfig,
    /// Run length batches on the rayon pool.
    pub parallel: bool,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            methods: Method::ALL.to_vec(),
            lengths: DEFAULT_LENGTHS.to_vec(),
            trials: 20,
            seed: 0,
            impute: ImputeConfig::default(),
            parallel: true,
        }
    }
}

struct Score {
    method: Method,
    length: usize,
    value: f64,
}

/// One batch: every trial of one gap length, masked together, one network.
fn run_batch(
    well: &WellLog,
    config: &BenchmarkConfig,
    length: usize,
    features: Option<&FeatureMatrix>,
    reference: &MetricReference,
) -> Result<Vec<Score>> {
    let target_name = &config.impute.features.target;
    let cases: Vec<EvalCase> = inject_gaps(well, target_name, &[length], config.trials, config.seed)?;
    let working = mask_cases(well.curve(target_name)?, &cases);

    let model = match features {
        Some(f) => {
            let train = TrainConfig {
                seed: derive_seed(config.impute.train.seed, &[config.seed, length as u64]),
                ..config.impute.train.clone()
            };
            Some(TrainedModel::fit(f, &working, &train)?.0)
        }
        None => None,
    };
    let network = model.as_ref().zip(features);

    let mut scores = Vec::with_capacity(cases.len() * config.methods.len());
    for case in &cases {
        for &method in &config.methods {
            let (filled, _, _) = fill_gap(method, &working, &case.gap, network, config.impute.anchor_k)
                .map_err(|e| e.context(format!("{method} on gap at {} (length {length})", case.gap.start)))?;
            scores.push(Score {
                method,
                length,
                value: reference.score(&filled, &case.truth)?,
            });
        }
    }
    Ok(scores)
}

/// Scores every method on injected gaps of every length and aggregates
/// mean and sample standard deviation per (method, length).
pub fn run_benchmark(well: &WellLog, config: &BenchmarkConfig) -> Result<EvalReport> {
    if config.methods.is_empty() {
        return Err(Error::InvalidConfig("no methods to benchmark".into()));
    }
    if config.lengths.is_empty() || config.trials == 0 {
        return Err(Error::InvalidConfig("need at least one length and one trial".into()));
    }
    let mut config = config.clone();
    config.methods.sort_unstable();
    config.methods.dedup();
    config.lengths.sort_unstable();
    config.lengths.dedup();
    let config = &config;
    let target = well.curve(&config.impute.features.target)?;
    let reference = MetricReference::new(&target.observed())?;

    let features = if config.methods.iter().any(|m| m.needs_network()) {
        Some(prepare_features(well, &config.impute.features, &config.impute.preprocess)?.0)
    } else {
        None
    };

    let lengths = &config.lengths;
    let batch = |&length: &usize| run_batch(well, config, length, features.as_ref(), &reference);
    let results: Vec<Result<Vec<Score>>> = if config.parallel {
        lengths.par_iter().map(batch).collect()
    } else {
        lengths.iter().map(batch).collect()
    };
    let mut scores = Vec::new();
    for r in results {
        scores.extend(r?);
    }

    let mut entries = Vec::with_capacity(config.methods.len() * lengths.len());
    for &method in &config.methods {
        for &length in lengths {
            let values: Vec<f64> = scores
                .iter()
                .filter(|s| s.method == method && s.length == length)
                .map(|s| s.value)
                .collect();
            entries.push(ReportEntry {
                method,
                gap_length: length,
                mean_score: mean(&values),
                std_score: sample_std(&values),
                trial_count: values.len(),
            });
        }
    }
    Ok(EvalReport {
        metric_name: METRIC_NAME.to_string(),
        entries,
    })
}
