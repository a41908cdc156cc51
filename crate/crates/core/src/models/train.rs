use log::debug;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::mlp::{Gradients, MlpParams};
use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::well_io::Curve;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Optimizer {
    Sgd,
    Adam { beta1: f64, beta2: f64, epsilon: f64 },
}

impl Optimizer {
    pub fn adam() -> Self {
        Optimizer::Adam {
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
    pub optimizer: Optimizer,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-3,
            epochs: 100,
            batch_size: 64,
            seed: 0,
            optimizer: Optimizer::adam(),
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0) || !self.learning_rate.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "learning rate {} must be > 0",
                self.learning_rate
            )));
        }
        if self.batch_size < 2 {
            return Err(Error::InvalidConfig("batch size must be >= 2".into()));
        }
        Ok(())
    }

    /// Fewest observed target rows accepted by [`train`].
    pub fn min_rows(&self) -> usize {
        10 * self.batch_size
    }
}

/// Per-parameter optimizer state over the flattened trainable tensors.
struct OptimizerState {
    kind: Optimizer,
    lr: f64,
    step: i32,
    m: Vec<f64>,
    v: Vec<f64>,
}

impl OptimizerState {
    fn new(config: &TrainConfig, size: usize) -> Self {
        let moments = matches!(config.optimizer, Optimizer::Adam { .. });
        Self {
            kind: config.optimizer,
            lr: config.learning_rate,
            step: 0,
            m: if moments { vec![0.0; size] } else { Vec::new() },
            v: if moments { vec![0.0; size] } else { Vec::new() },
        }
    }

    fn apply(&mut self, params: &mut MlpParams, grads: &Gradients) {
        self.step += 1;
        let lr = self.lr;
        let mut offset = 0;
        for ((_, p), (_, g)) in params.trainable_mut().into_iter().zip(grads.slices()) {
            match self.kind {
                Optimizer::Sgd => {
                    for (p, g) in p.iter_mut().zip(g) {
                        *p -= lr * g;
                    }
                }
                Optimizer::Adam { beta1, beta2, epsilon } => {
                    let c1 = 1.0 - beta1.powi(self.step);
                    let c2 = 1.0 - beta2.powi(self.step);
                    let m = &mut self.m[offset..offset + p.len()];
                    let v = &mut self.v[offset..offset + p.len()];
                    for (((p, g), m), v) in p.iter_mut().zip(g).zip(m).zip(v) {
                        *m = beta1 * *m + (1.0 - beta1) * g;
                        *v = beta2 * *v + (1.0 - beta2) * g * g;
                        *p -= lr * (*m / c1) / ((*v / c2).sqrt() + epsilon);
                    }
                }
            }
            offset += p.len();
        }
    }
}

/// Final parameters and the mean train-mode loss of every epoch.
#[derive(Debug, Clone)]
pub struct Trained {
    pub params: MlpParams,
    pub epoch_losses: Vec<f64>,
}

/// Minibatch training on the rows where `target` is observed. The target is
/// used as given; callers scale it beforehand.
pub fn train(features: &FeatureMatrix, target: &Curve, config: &TrainConfig) -> Result<Trained> {
    config.validate()?;
    if target.len() != features.n_rows() {
        return Err(Error::DimensionMismatch {
            expected: features.n_rows(),
            found: target.len(),
        });
    }
    let mut rows: Vec<usize> = (0..target.len()).filter(|&i| target.values[i].is_some()).collect();
    if rows.len() < config.min_rows() {
        return Err(Error::InsufficientRows {
            found: rows.len(),
            required: config.min_rows(),
        });
    }
    let mut params = MlpParams::init(features.n_cols(), config.seed)?;
    let mut optimizer = OptimizerState::new(config, params.trainable_count());
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(1));
    let mut epoch_losses = Vec::with_capacity(config.epochs);
    let mut batch_target = Vec::with_capacity(config.batch_size);

    for epoch in 0..config.epochs {
        rows.shuffle(&mut rng);
        let (mut loss_sum, mut seen) = (0.0, 0usize);
        for chunk in rows.chunks(config.batch_size) {
            if chunk.len() < 2 {
                continue;
            }
            let x = features.select_rows(chunk)?;
            batch_target.clear();
            batch_target.extend(chunk.iter().map(|&i| target.values[i].unwrap()));
            let cache = params.forward_train(&x)?;
            let (loss, grads) = params.backward(&cache, &batch_target)?;
            if !loss.is_finite() {
                return Err(Error::NonFinite(format!("training loss at epoch {epoch}")));
            }
            optimizer.apply(&mut params, &grads);
            loss_sum += loss * chunk.len() as f64;
            seen += chunk.len();
        }
        let epoch_loss = loss_sum / seen as f64;
        debug!("epoch {epoch}: mse {epoch_loss:.6}");
        epoch_losses.push(epoch_loss);
    }
    Ok(Trained { params, epoch_losses })
}
