//! Gap-filling methods and the policy that picks one per gap.
//!
//! Short gaps are well served by a straight line between their anchors.
//! Longer gaps are filled by a network trained on the observed rows of the
//! same well and then shifted onto the local level of the curve.

pub mod interp;
pub mod mlp;
pub mod shift;
pub mod train;

use std::fmt;
use std::str::FromStr;

use log::info;
use serde::{Deserialize, Serialize};

pub use interp::{cubic_interpolate, linear_interpolate};
pub use mlp::{mlp_init, BatchNormState, ForwardCache, Gradients, MlpParams, Mode};
pub use shift::{anchor_rows, predict_gap, shift_correct, RowPredictor, ShiftedPrediction, TrainedModel};
pub use train::{train, Optimizer, TrainConfig, Trained};

use crate::error::{Error, Result};
use crate::features::{prepare_features, FeatureConfig, FeatureMatrix};
use crate::preprocess::{PreprocessConfig, ScalerParams};
use crate::well_io::{detect_gaps, Curve, GapSpec, WellLog};

/// A concrete filling method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Linear,
    Cubic,
    Nn,
    NnShift,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Linear, Method::Cubic, Method::Nn, Method::NnShift];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Linear => "linear",
            Method::Cubic => "cubic",
            Method::Nn => "nn",
            Method::NnShift => "nn_shift",
        }
    }

    pub fn needs_network(self) -> bool {
        matches!(self, Method::Nn | Method::NnShift)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown method {s:?}")))
    }
}

/// How methods are assigned to gaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// Linear up to the threshold length, shifted network beyond it.
    Auto,
    Fixed(Method),
}

impl Policy {
    pub fn method_for(self, gap_length: usize, threshold: usize) -> Method {
        match self {
            Policy::Auto if gap_length <= threshold => Method::Linear,
            Policy::Auto => Method::NnShift,
            Policy::Fixed(m) => m,
        }
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            Ok(Policy::Auto)
        } else {
            s.parse().map(Policy::Fixed)
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::Auto => f.write_str("auto"),
            Policy::Fixed(m) => m.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImputeConfig {
    pub policy: Policy,
    /// Longest gap that `auto` fills linearly.
    pub threshold: usize,
    pub anchor_k: usize,
    pub features: FeatureConfig,
    pub preprocess: PreprocessConfig,
    pub train: TrainConfig,
}

impl Default for ImputeConfig {
    fn default() -> Self {
        Self {
            policy: Policy::Auto,
            threshold: 5,
            anchor_k: 10,
            features: FeatureConfig::default(),
            preprocess: PreprocessConfig::default(),
            train: TrainConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapOutcome {
    pub gap: GapSpec,
    pub method: Method,
    /// Offset added by shift correction; zero for other methods.
    pub shift: f64,
}

/// Everything needed to replay a network imputation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelArtifact {
    pub d_in: usize,
    pub feature_columns: Vec<String>,
    pub features: FeatureConfig,
    pub preprocess: PreprocessConfig,
    pub predictor_scaler: ScalerParams,
    pub model: TrainedModel,
    pub train: TrainConfig,
    pub seed: u64,
}

impl ModelArtifact {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let artifact: Self =
            serde_json::from_str(text).map_err(|e| Error::InvalidConfig(format!("model file: {e}")))?;
        artifact.model.params.validate()?;
        if artifact.model.params.d_in() != artifact.d_in || artifact.feature_columns.len() != artifact.d_in {
            return Err(Error::DimensionMismatch {
                expected: artifact.d_in,
                found: artifact.model.params.d_in(),
            });
        }
        Ok(artifact)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImputationResult {
    pub filled_curve: Curve,
    pub per_gap: Vec<GapOutcome>,
    /// Gaps touching either end of the well; left missing.
    pub unanchored: Vec<GapSpec>,
    /// Present when a network was trained.
    pub model: Option<ModelArtifact>,
}

/// Trains a network on the observed target rows of `features`.
pub fn fit_network(features: &FeatureMatrix, target: &Curve, config: &TrainConfig) -> Result<TrainedModel> {
    let (model, losses) = TrainedModel::fit(features, target, config)?;
    if let Some(last) = losses.last() {
        info!(
            "trained on {} rows, final mse {last:.5}",
            target.len() - target.missing_count()
        );
    }
    Ok(model)
}

/// Fills one gap with `method` given an optional trained network.
/// Cubic falls back to linear when either side has fewer than two anchors.
pub fn fill_gap(
    method: Method,
    curve: &Curve,
    gap: &GapSpec,
    network: Option<(&TrainedModel, &FeatureMatrix)>,
    anchor_k: usize,
) -> Result<(Vec<f64>, Method, f64)> {
    let need_net = || network.ok_or_else(|| Error::InvalidConfig(format!("method {method} needs a trained network")));
    let (values, used, shift) = match method {
        Method::Linear => (linear_interpolate(curve, gap)?, Method::Linear, 0.0),
        Method::Cubic => match cubic_interpolate(curve, gap) {
            Ok(v) => (v, Method::Cubic, 0.0),
            Err(Error::TooFewAnchors { .. }) => (linear_interpolate(curve, gap)?, Method::Linear, 0.0),
            Err(e) => return Err(e),
        },
        Method::Nn => {
            let (model, features) = need_net()?;
            (predict_gap(model, features, gap)?, Method::Nn, 0.0)
        }
        Method::NnShift => {
            let (model, features) = need_net()?;
            let s = shift_correct(model, features, curve, gap, anchor_k)?;
            (s.values, Method::NnShift, s.shift)
        }
    };
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!(
            "{used} prediction at index {}",
            gap.start + i
        )));
    }
    Ok((values, used, shift))
}

/// Fills every anchored gap of the target curve according to `config.policy`.
pub fn impute(well: &WellLog, config: &ImputeConfig) -> Result<ImputationResult> {
    if config.anchor_k == 0 {
        return Err(Error::InvalidConfig("anchor_k must be >= 1".into()));
    }
    let target = well.curve(&config.features.target)?;
    let n = target.len();
    let (anchored, unanchored): (Vec<GapSpec>, Vec<GapSpec>) =
        detect_gaps(target).into_iter().partition(|g| g.is_anchored(n));
    let plan: Vec<Method> = anchored
        .iter()
        .map(|g| config.policy.method_for(g.length, config.threshold))
        .collect();

    let mut artifact = None;
    let mut network = None;
    if plan.iter().any(|m| m.needs_network()) {
        let (features, scaler) = prepare_features(well, &config.features, &config.preprocess)?;
        let model = fit_network(&features, target, &config.train)?;
        artifact = Some(ModelArtifact {
            d_in: features.n_cols(),
            feature_columns: features.column_names.clone(),
            features: config.features.clone(),
            preprocess: config.preprocess.clone(),
            predictor_scaler: scaler,
            model: model.clone(),
            train: config.train.clone(),
            seed: config.train.seed,
        });
        network = Some((model, features));
    }

    let mut values = target.values.clone();
    let mut per_gap = Vec::with_capacity(anchored.len());
    for (gap, method) in anchored.into_iter().zip(plan) {
        let net = network.as_ref().map(|(m, f)| (m, f));
        let (fill, used, shift) = fill_gap(method, target, &gap, net, config.anchor_k)?;
        for (slot, v) in values[gap.indices()].iter_mut().zip(fill) {
            *slot = Some(v);
        }
        per_gap.push(GapOutcome {
            gap,
            method: used,
            shift,
        });
    }
    Ok(ImputationResult {
        filled_curve: target.with_values(values),
        per_gap,
        unanchored,
        model: artifact,
    })
}
