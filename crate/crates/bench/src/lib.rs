//! Shared fixtures for the criterion benches.

use loggap_core::eval::synthesize_well;
use loggap_core::features::prepare_features;
use loggap_core::models::{mlp_init, MlpParams};
use loggap_core::preprocess::PreprocessConfig;
use loggap_core::{Curve, FeatureConfig, FeatureMatrix, SyntheticConfig, WellLog};

pub fn well(length: usize) -> WellLog {
    synthesize_well(&SyntheticConfig {
        length,
        ..SyntheticConfig::default()
    })
    .expect("synthetic well")
}

/// The SP column of a synthetic well, a realistic input for the detrend and smoothing kernels.
pub fn signal(length: usize) -> Vec<f64> {
    well(length)
        .curve("SP")
        .unwrap()
        .values
        .iter()
        .map(|v| v.unwrap())
        .collect()
}

pub struct MlpFixture {
    pub params: MlpParams,
    pub features: FeatureMatrix,
    /// GR, one sample per feature row.
    pub target: Curve,
}

pub fn mlp_fixture(length: usize) -> MlpFixture {
    let well = well(length);
    let (features, _) =
        prepare_features(&well, &FeatureConfig::default(), &PreprocessConfig::default()).expect("features");
    let target = well.curve("GR").unwrap().clone();
    let params = mlp_init(features.n_cols(), 0).expect("init");
    MlpFixture {
        params,
        features,
        target,
    }
}
