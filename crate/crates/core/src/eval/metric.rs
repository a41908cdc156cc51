use crate::error::{Error, Result};
use crate::stats::quantile_sorted;

/// Linear-interpolation percentile, `p` in `[0, 100]`.
pub fn percentile(values: &[f64], p: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(0.0..=100.0).contains(&p) {
        return Err(Error::PercentileRange(p));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(quantile_sorted(&sorted, p / 100.0))
}

/// Denominator of the normalized error: the 1st–99th percentile spread of a
/// reference series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricReference {
    pub p1: f64,
    pub p99: f64,
}

impl MetricReference {
    pub fn new(reference: &[f64]) -> Result<Self> {
        if reference.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut sorted = reference.to_vec();
        sorted.sort_by(f64::total_cmp);
        let p1 = quantile_sorted(&sorted, 0.01);
        let p99 = quantile_sorted(&sorted, 0.99);
        if !(p99 > p1) {
            return Err(Error::DegenerateReference(p1));
        }
        Ok(Self { p1, p99 })
    }

    pub fn spread(&self) -> f64 {
        self.p99 - self.p1
    }

    pub fn score(&self, predicted: &[f64], truth: &[f64]) -> Result<f64> {
        if predicted.len() != truth.len() {
            return Err(Error::DimensionMismatch {
                expected: truth.len(),
                found: predicted.len(),
            });
        }
        if truth.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mae = predicted.iter().zip(truth).map(|(p, t)| (p - t).abs()).sum::<f64>() / truth.len() as f64;
        Ok(mae / self.spread())
    }
}

/// Mean absolute error divided by `P99(reference) − P1(reference)`.
pub fn normalized_mae(predicted: &[f64], truth: &[f64], reference: &[f64]) -> Result<f64> {
    MetricReference::new(reference)?.score(predicted, truth)
}
