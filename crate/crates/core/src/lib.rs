//! Gap imputation for gamma-ray well-log curves.
//!
//! The pipeline reads a well ([`well_io`]), preprocesses the predictor
//! curves ([`preprocess`]), builds windowed features ([`features`]) and fills
//! the target curve with interpolation or a small batch-normalized MLP
//! ([`models`]). [`eval`] measures methods against each other on injected
//! gaps.

// `!(x > 0.0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod eval;
pub mod features;
pub mod models;
pub mod preprocess;
pub mod stats;
pub mod well_io;

pub use error::{Error, ErrorKind, Result};
pub use eval::{EvalReport, SyntheticConfig};
pub use features::{FeatureConfig, FeatureMatrix};
pub use models::{ImputationResult, ImputeConfig, Method, MlpParams, Policy, TrainConfig};
pub use preprocess::{DetrendConfig, ScalerParams};
pub use well_io::{Curve, GapSpec, GapStats, WellLog};
