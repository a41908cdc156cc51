//! Two hidden layers of width 100 and 50, each `relu(batchnorm(x·W + b))`,
//! followed by a linear output unit.

use ndarray::{Array1, Array2, ArrayView1, Axis};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const HIDDEN1: usize = 100;
pub const HIDDEN2: usize = 50;
pub const BN_EPSILON: f64 = 1e-5;
pub const BN_MOMENTUM: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchNormState {
    pub gamma: Array1<f64>,
    pub beta: Array1<f64>,
    pub running_mean: Array1<f64>,
    pub running_var: Array1<f64>,
    pub epsilon: f64,
    /// Weight kept on the old running statistics at each update.
    pub momentum: f64,
}

impl BatchNormState {
    pub fn new(width: usize) -> Self {
        Self {
            gamma: Array1::ones(width),
            beta: Array1::zeros(width),
            running_mean: Array1::zeros(width),
            running_var: Array1::ones(width),
            epsilon: BN_EPSILON,
            momentum: BN_MOMENTUM,
        }
    }

    fn update_running(&mut self, stats: &BatchStats, batch: usize) {
        let m = self.momentum;
        // Unbiased variance for the running estimate.
        let correction = batch as f64 / (batch as f64 - 1.0);
        self.running_mean = &self.running_mean * m + &stats.mean * (1.0 - m);
        self.running_var = &self.running_var * m + &stats.var * ((1.0 - m) * correction);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpParams {
    pub w1: Array2<f64>,
    pub b1: Array1<f64>,
    pub bn1: BatchNormState,
    pub w2: Array2<f64>,
    pub b2: Array1<f64>,
    pub bn2: BatchNormState,
    pub w3: Array2<f64>,
    pub b3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Batch statistics; running statistics are updated.
    Train,
    /// Running statistics; nothing is modified.
    Infer,
}

#[derive(Debug, Clone)]
struct BatchStats {
    mean: Array1<f64>,
    var: Array1<f64>,
}

#[derive(Debug, Clone)]
struct LayerCache {
    input: Array2<f64>,
    xhat: Array2<f64>,
    inv_std: Array1<f64>,
    pre_relu: Array2<f64>,
    stats: BatchStats,
}

/// Intermediate values of a train-mode forward pass, consumed by [`MlpParams::backward`].
#[derive(Debug, Clone)]
pub struct ForwardCache {
    layer1: LayerCache,
    layer2: LayerCache,
    hidden2: Array2<f64>,
    pub predictions: Array1<f64>,
}

impl ForwardCache {
    /// Normalized layer-1 pre-activations (before gamma/beta).
    pub fn normalized_layer1(&self) -> &Array2<f64> {
        &self.layer1.xhat
    }

    pub fn normalized_layer2(&self) -> &Array2<f64> {
        &self.layer2.xhat
    }
}

/// Parameter gradients, same shapes as [`MlpParams`].
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub w1: Array2<f64>,
    pub b1: Array1<f64>,
    pub gamma1: Array1<f64>,
    pub beta1: Array1<f64>,
    pub w2: Array2<f64>,
    pub b2: Array1<f64>,
    pub gamma2: Array1<f64>,
    pub beta2: Array1<f64>,
    pub w3: Array2<f64>,
    pub b3: f64,
}

/// Row-major copy when a product came back column-major.
fn standard(a: Array2<f64>) -> Array2<f64> {
    if a.is_standard_layout() {
        a
    } else {
        a.as_standard_layout().into_owned()
    }
}

impl Gradients {
    /// Flat views in the same order as [`MlpParams::trainable_mut`].
    pub fn slices(&self) -> [(&'static str, &[f64]); 10] {
        fn s<D: ndarray::Dimension>(a: &ndarray::Array<f64, D>) -> &[f64] {
            a.as_slice().expect("standard layout")
        }
        [
            ("w1", s(&self.w1)),
            ("b1", s(&self.b1)),
            ("gamma1", s(&self.gamma1)),
            ("beta1", s(&self.beta1)),
            ("w2", s(&self.w2)),
            ("b2", s(&self.b2)),
            ("gamma2", s(&self.gamma2)),
            ("beta2", s(&self.beta2)),
            ("w3", s(&self.w3)),
            ("b3", std::slice::from_ref(&self.b3)),
        ]
    }
}

fn he_normal(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Array2<f64> {
    let dist = Normal::new(0.0, (2.0 / rows as f64).sqrt()).expect("positive std");
    Array2::from_shape_simple_fn((rows, cols), || dist.sample(rng))
}

fn batch_norm(z: &Array2<f64>, bn: &BatchNormState) -> (Array2<f64>, Array1<f64>, BatchStats) {
    let m = z.nrows() as f64;
    let mean = z.sum_axis(Axis(0)) / m;
    let centered = z - &mean;
    let var = centered.mapv(|v| v * v).sum_axis(Axis(0)) / m;
    let inv_std = var.mapv(|v| 1.0 / (v + bn.epsilon).sqrt());
    let xhat = centered * &inv_std;
    (xhat, inv_std, BatchStats { mean, var })
}

fn bn_backward(dxhat: Array2<f64>, cache: &LayerCache) -> Array2<f64> {
    let m = dxhat.nrows() as f64;
    let sum_d = dxhat.sum_axis(Axis(0));
    let sum_dx = (&dxhat * &cache.xhat).sum_axis(Axis(0));
    let mut dz = dxhat * m - &sum_d - &(&cache.xhat * &sum_dx);
    dz *= &(&cache.inv_std / m);
    dz
}

impl MlpParams {
    /// He-normal weights, zero biases, identity batch norm.
    pub fn init(d_in: usize, seed: u64) -> Result<Self> {
        if d_in == 0 {
            return Err(Error::InvalidConfig("network input width must be >= 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(Self {
            w1: he_normal(&mut rng, d_in, HIDDEN1),
            b1: Array1::zeros(HIDDEN1),
            bn1: BatchNormState::new(HIDDEN1),
            w2: he_normal(&mut rng, HIDDEN1, HIDDEN2),
            b2: Array1::zeros(HIDDEN2),
            bn2: BatchNormState::new(HIDDEN2),
            w3: he_normal(&mut rng, HIDDEN2, 1),
            b3: 0.0,
        })
    }

    pub fn d_in(&self) -> usize {
        self.w1.nrows()
    }

    /// Checks shapes and finiteness, e.g. after deserialization.
    pub fn validate(&self) -> Result<()> {
        let d = self.d_in();
        let shapes = [
            (self.w1.ncols(), HIDDEN1),
            (self.b1.len(), HIDDEN1),
            (self.w2.nrows(), HIDDEN1),
            (self.w2.ncols(), HIDDEN2),
            (self.b2.len(), HIDDEN2),
            (self.w3.nrows(), HIDDEN2),
            (self.w3.ncols(), 1),
            (self.bn1.gamma.len(), HIDDEN1),
            (self.bn1.beta.len(), HIDDEN1),
            (self.bn1.running_mean.len(), HIDDEN1),
            (self.bn1.running_var.len(), HIDDEN1),
            (self.bn2.gamma.len(), HIDDEN2),
            (self.bn2.beta.len(), HIDDEN2),
            (self.bn2.running_mean.len(), HIDDEN2),
            (self.bn2.running_var.len(), HIDDEN2),
        ];
        if d == 0 {
            return Err(Error::InvalidConfig("network input width must be >= 1".into()));
        }
        for (found, expected) in shapes {
            if found != expected {
                return Err(Error::DimensionMismatch { expected, found });
            }
        }
        let all_finite = self
            .w1
            .iter()
            .chain(&self.b1)
            .chain(&self.w2)
            .chain(&self.b2)
            .chain(&self.w3)
            .all(|v| v.is_finite())
            && self.b3.is_finite();
        if !all_finite {
            return Err(Error::NonFinite("network weights".into()));
        }
        for bn in [&self.bn1, &self.bn2] {
            if !(bn.epsilon > 0.0) || bn.running_var.iter().any(|v| *v < 0.0) {
                return Err(Error::InvalidConfig("invalid batch-norm state".into()));
            }
        }
        Ok(())
    }

    fn check_input(&self, batch: &Array2<f64>) -> Result<()> {
        if batch.ncols() != self.d_in() {
            return Err(Error::DimensionMismatch {
                expected: self.d_in(),
                found: batch.ncols(),
            });
        }
        Ok(())
    }

    fn train_layer(
        input: Array2<f64>,
        w: &Array2<f64>,
        b: &Array1<f64>,
        bn: &BatchNormState,
    ) -> (Array2<f64>, LayerCache) {
        let z = input.dot(w) + b;
        let (xhat, inv_std, stats) = batch_norm(&z, bn);
        let pre_relu = &xhat * &bn.gamma + &bn.beta;
        let out = pre_relu.mapv(|v| v.max(0.0));
        let cache = LayerCache {
            input,
            xhat,
            inv_std,
            pre_relu,
            stats,
        };
        (out, cache)
    }

    /// Train-mode forward pass using batch statistics, without touching the
    /// running statistics.
    pub fn forward_batch(&self, batch: &Array2<f64>) -> Result<ForwardCache> {
        self.check_input(batch)?;
        if batch.nrows() < 2 {
            return Err(Error::BatchTooSmall(batch.nrows()));
        }
        let (h1, layer1) = Self::train_layer(batch.clone(), &self.w1, &self.b1, &self.bn1);
        let (h2, layer2) = Self::train_layer(h1, &self.w2, &self.b2, &self.bn2);
        let predictions = h2.dot(&self.w3).column(0).to_owned() + self.b3;
        Ok(ForwardCache {
            layer1,
            layer2,
            hidden2: h2,
            predictions,
        })
    }

    /// Train-mode forward pass that also folds the batch statistics into
    /// the running averages.
    pub fn forward_train(&mut self, batch: &Array2<f64>) -> Result<ForwardCache> {
        let cache = self.forward_batch(batch)?;
        let m = batch.nrows();
        self.bn1.update_running(&cache.layer1.stats, m);
        self.bn2.update_running(&cache.layer2.stats, m);
        Ok(cache)
    }

    /// Inference with running statistics.
    pub fn predict(&self, batch: &Array2<f64>) -> Result<Array1<f64>> {
        self.check_input(batch)?;
        let layer = |x: Array2<f64>, w: &Array2<f64>, b: &Array1<f64>, bn: &BatchNormState| {
            let inv_std = bn.running_var.mapv(|v| 1.0 / (v + bn.epsilon).sqrt());
            let scale = &bn.gamma * &inv_std;
            let shift = &bn.beta - &(&bn.running_mean * &scale);
            let mut z = x.dot(w) + b;
            z *= &scale;
            z += &shift;
            z.mapv_into(|v| v.max(0.0))
        };
        let h1 = layer(batch.clone(), &self.w1, &self.b1, &self.bn1);
        let h2 = layer(h1, &self.w2, &self.b2, &self.bn2);
        Ok(h2.dot(&self.w3).column(0).to_owned() + self.b3)
    }

    /// Single-row inference.
    pub fn predict_row(&self, row: ArrayView1<'_, f64>) -> Result<f64> {
        let batch = row.to_owned().insert_axis(Axis(0));
        Ok(self.predict(&batch)?[0])
    }

    /// Dispatching wrapper over [`Self::forward_train`] and [`Self::predict`].
    pub fn forward(&mut self, batch: &Array2<f64>, mode: Mode) -> Result<Array1<f64>> {
        match mode {
            Mode::Train => Ok(self.forward_train(batch)?.predictions),
            Mode::Infer => self.predict(batch),
        }
    }

    /// Mean squared error of a cached forward pass and its gradients.
    pub fn backward(&self, cache: &ForwardCache, target: &[f64]) -> Result<(f64, Gradients)> {
        let m = cache.predictions.len();
        if target.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: target.len(),
            });
        }
        if cache.layer1.input.ncols() != self.d_in() || cache.hidden2.ncols() != self.w3.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.d_in(),
                found: cache.layer1.input.ncols(),
            });
        }
        let residual = &cache.predictions - &ArrayView1::from(target);
        let loss = residual.mapv(|r| r * r).sum() / m as f64;
        let dpred = residual * (2.0 / m as f64);

        let dpred_col = dpred.view().insert_axis(Axis(1));
        let w3 = standard(cache.hidden2.t().dot(&dpred_col));
        let b3 = dpred.sum();
        let dh2 = dpred_col.dot(&self.w3.t());

        let (gamma2, beta2, w2, b2, dh1) = Self::layer_backward(dh2, &cache.layer2, &self.bn2, &self.w2, true);
        let (gamma1, beta1, w1, b1, _) =
            Self::layer_backward(dh1.expect("requested"), &cache.layer1, &self.bn1, &self.w1, false);

        Ok((
            loss,
            Gradients {
                w1,
                b1,
                gamma1,
                beta1,
                w2,
                b2,
                gamma2,
                beta2,
                w3,
                b3,
            },
        ))
    }

    #[allow(clippy::type_complexity)]
    fn layer_backward(
        dout: Array2<f64>,
        cache: &LayerCache,
        bn: &BatchNormState,
        w: &Array2<f64>,
        want_input_grad: bool,
    ) -> (Array1<f64>, Array1<f64>, Array2<f64>, Array1<f64>, Option<Array2<f64>>) {
        let mut dy = dout;
        ndarray::Zip::from(&mut dy).and(&cache.pre_relu).for_each(|d, &y| {
            if y <= 0.0 {
                *d = 0.0;
            }
        });
        let dgamma = (&dy * &cache.xhat).sum_axis(Axis(0));
        let dbeta = dy.sum_axis(Axis(0));
        let dxhat = dy * &bn.gamma;
        let dz = bn_backward(dxhat, cache);
        let dw = standard(cache.input.t().dot(&dz));
        let db = dz.sum_axis(Axis(0));
        let dinput = want_input_grad.then(|| dz.dot(&w.t()));
        (dgamma, dbeta, dw, db, dinput)
    }

    /// Flat mutable views of every trainable tensor. Running statistics are
    /// not trainable and are excluded.
    pub fn trainable_mut(&mut self) -> [(&'static str, &mut [f64]); 10] {
        fn s<D: ndarray::Dimension>(a: &mut ndarray::Array<f64, D>) -> &mut [f64] {
            a.as_slice_mut().expect("standard layout")
        }
        [
            ("w1", s(&mut self.w1)),
            ("b1", s(&mut self.b1)),
            ("gamma1", s(&mut self.bn1.gamma)),
            ("beta1", s(&mut self.bn1.beta)),
            ("w2", s(&mut self.w2)),
            ("b2", s(&mut self.b2)),
            ("gamma2", s(&mut self.bn2.gamma)),
            ("beta2", s(&mut self.bn2.beta)),
            ("w3", s(&mut self.w3)),
            ("b3", std::slice::from_mut(&mut self.b3)),
        ]
    }

    pub fn trainable_count(&self) -> usize {
        let d = self.d_in();
        d * HIDDEN1 + 3 * HIDDEN1 + HIDDEN1 * HIDDEN2 + 3 * HIDDEN2 + HIDDEN2 + 1
    }
}

/// Seeded initialization; see [`MlpParams::init`].
pub fn mlp_init(d_in: usize, seed: u64) -> Result<MlpParams> {
    MlpParams::init(d_in, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn random_batch(rows: usize, cols: usize, seed: u64, scale: f64) -> Array2<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Array2::from_shape_simple_fn((rows, cols), || rng.random_range(-1.0..1.0) * scale)
    }

    #[test]
    fn init_is_deterministic() {
        let a = mlp_init(7, 42).unwrap();
        assert_eq!(a, mlp_init(7, 42).unwrap());
        assert_ne!(a.w1, mlp_init(7, 43).unwrap().w1);
        assert!(mlp_init(0, 1).is_err());
        a.validate().unwrap();
        assert_eq!(a.bn1.gamma, Array1::<f64>::ones(HIDDEN1));
        assert_eq!(a.bn2.running_var, Array1::<f64>::ones(HIDDEN2));
    }

    #[test]
    fn init_mean_within_standard_error() {
        let d_in = 40;
        let p = mlp_init(d_in, 9).unwrap();
        let mean = p.w1.mean().unwrap();
        let bound = 3.0 * (2.0 / d_in as f64).sqrt() / ((100 * d_in) as f64).sqrt();
        assert!(mean.abs() < bound, "{mean} vs {bound}");
    }

    #[test]
    fn zero_network_outputs_zero() {
        let mut p = mlp_init(4, 1).unwrap();
        p.w1.fill(0.0);
        p.w2.fill(0.0);
        p.w3.fill(0.0);
        p.bn1.gamma.fill(0.0);
        p.bn2.gamma.fill(0.0);
        let x = random_batch(6, 4, 2, 3.0);
        assert!(p.predict(&x).unwrap().iter().all(|v| *v == 0.0));
        assert!(p.forward_batch(&x).unwrap().predictions.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn infer_is_pure() {
        let p = mlp_init(3, 5).unwrap();
        let x = random_batch(8, 3, 6, 1.0);
        let before = p.clone();
        let a = p.predict(&x).unwrap();
        let b = p.predict(&x).unwrap();
        assert_eq!(a, b);
        assert_eq!(p, before);
    }

    #[test]
    fn train_mode_updates_running_stats() {
        let mut p = mlp_init(3, 5).unwrap();
        let x = random_batch(8, 3, 6, 1.0);
        p.forward(&x, Mode::Train).unwrap();
        assert_ne!(p.bn1.running_mean, Array1::<f64>::zeros(HIDDEN1));
        assert!(p.bn1.running_var.iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn batch_norm_standardizes() {
        let p = mlp_init(5, 11).unwrap();
        // Large inputs so that eps is negligible next to the batch variance.
        let x = random_batch(64, 5, 12, 1e3);
        let cache = p.forward_batch(&x).unwrap();
        for xhat in [cache.normalized_layer1()] {
            for col in xhat.columns() {
                let m = col.mean().unwrap();
                let v = col.mapv(|c| (c - m) * (c - m)).mean().unwrap();
                assert!(m.abs() < 1e-6, "mean {m}");
                assert!((v - 1.0).abs() < 1e-6, "var {v}");
            }
        }
    }

    #[test]
    fn errors_on_bad_shapes() {
        let mut p = mlp_init(3, 1).unwrap();
        assert!(matches!(
            p.predict(&random_batch(4, 2, 1, 1.0)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert_eq!(
            p.forward(&random_batch(1, 3, 1, 1.0), Mode::Train).unwrap_err(),
            Error::BatchTooSmall(1)
        );
        let cache = p.forward_batch(&random_batch(4, 3, 1, 1.0)).unwrap();
        assert!(p.backward(&cache, &[0.0; 3]).is_err());
        let other = mlp_init(5, 1).unwrap();
        assert!(other.backward(&cache, &[0.0; 4]).is_err());
    }

    #[test]
    fn zero_residual_zero_output_gradient() {
        let p = mlp_init(3, 2).unwrap();
        let cache = p.forward_batch(&random_batch(5, 3, 4, 1.0)).unwrap();
        let target = cache.predictions.to_vec();
        let (loss, g) = p.backward(&cache, &target).unwrap();
        assert_eq!(loss, 0.0);
        assert!(g.w3.iter().all(|v| *v == 0.0));
        assert_eq!(g.b3, 0.0);
    }

    #[test]
    fn output_gradient_linear_in_residual() {
        let p = mlp_init(3, 2).unwrap();
        let cache = p.forward_batch(&random_batch(5, 3, 4, 1.0)).unwrap();
        let preds = cache.predictions.to_vec();
        let t1: Vec<f64> = preds
            .iter()
            .enumerate()
            .map(|(i, y)| y - 0.3 * i as f64 + 0.1)
            .collect();
        let t2: Vec<f64> = preds.iter().zip(&t1).map(|(y, t)| y - 2.0 * (y - t)).collect();
        let (_, g1) = p.backward(&cache, &t1).unwrap();
        let (_, g2) = p.backward(&cache, &t2).unwrap();
        for (a, b) in g1.w3.iter().zip(&g2.w3) {
            assert!((2.0 * a - b).abs() <= 1e-9 * b.abs().max(1.0));
        }
        assert!((2.0 * g1.b3 - g2.b3).abs() <= 1e-9);
    }

    #[test]
    fn trainable_views_cover_every_parameter() {
        let mut p = mlp_init(3, 2).unwrap();
        let total: usize = p.trainable_mut().iter().map(|(_, s)| s.len()).sum();
        assert_eq!(total, p.trainable_count());
    }
}
