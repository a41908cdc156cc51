#![allow(dead_code)]

use loggap_core::models::MlpParams;
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FD_STEP: f64 = 1e-5;
pub const FD_REL_TOL: f64 = 1e-4;
pub const FD_ABS_FLOOR: f64 = 1e-6;

/// Loss and the signs of every hidden pre-activation. A sign change between
/// the two probes of a central difference means the interval straddles a
/// ReLU kink.
fn probe(params: &MlpParams, x: &Array2<f64>, y: &[f64]) -> (f64, Vec<bool>) {
    let cache = params.forward_batch(x).unwrap();
    let loss = cache
        .predictions
        .iter()
        .zip(y)
        .map(|(p, t)| (p - t).powi(2))
        .sum::<f64>()
        / y.len() as f64;
    let pre1 = cache.normalized_layer1() * &params.bn1.gamma + &params.bn1.beta;
    let pre2 = cache.normalized_layer2() * &params.bn2.gamma + &params.bn2.beta;
    (loss, pre1.iter().chain(pre2.iter()).map(|v| *v > 0.0).collect())
}

#[derive(Debug)]
pub struct GradCheck {
    pub components: usize,
    pub failures: Vec<String>,
    /// Components whose ±step probes straddled a kink and were re-measured
    /// with a smaller step.
    pub kinks: usize,
}

/// Random d_in=3, 5-row instance with perturbed gamma/beta, every trainable
/// component compared against central differences.
pub fn gradient_check(seed: u64) -> GradCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = Array2::from_shape_simple_fn((5, 3), || rng.random_range(-2.0..2.0));
    let y: Vec<f64> = (0..5).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut params = MlpParams::init(3, seed).unwrap();
    for v in params.bn1.gamma.iter_mut().chain(params.bn2.gamma.iter_mut()) {
        *v = rng.random_range(0.5..1.5);
    }
    for v in params.bn1.beta.iter_mut().chain(params.bn2.beta.iter_mut()) {
        *v = rng.random_range(-0.5..0.5);
    }
    let cache = params.forward_batch(&x).unwrap();
    let (_, grads) = params.backward(&cache, &y).unwrap();
    let analytic: Vec<(String, Vec<f64>)> = grads
        .slices()
        .iter()
        .map(|(n, s)| (n.to_string(), s.to_vec()))
        .collect();

    let mut out = GradCheck {
        components: 0,
        failures: Vec::new(),
        kinks: 0,
    };
    for (t, (name, g)) in analytic.iter().enumerate() {
        for (i, &ga) in g.iter().enumerate() {
            out.components += 1;
            let orig = params.trainable_mut()[t].1[i];
            let mut step = FD_STEP;
            let numeric = loop {
                params.trainable_mut()[t].1[i] = orig + step;
                let (up, up_pat) = probe(&params, &x, &y);
                params.trainable_mut()[t].1[i] = orig - step;
                let (down, down_pat) = probe(&params, &x, &y);
                params.trainable_mut()[t].1[i] = orig;
                if up_pat == down_pat || step < 1e-9 {
                    break (up - down) / (2.0 * step);
                }
                if step == FD_STEP {
                    out.kinks += 1;
                }
                step /= 10.0;
            };
            let tol = (FD_REL_TOL * ga.abs().max(numeric.abs())).max(FD_ABS_FLOOR);
            if (ga - numeric).abs() > tol {
                out.failures.push(format!(
                    "{name}[{i}]: analytic {ga:e}, numeric {numeric:e} (step {step:e})"
                ));
            }
        }
    }
    out
}
