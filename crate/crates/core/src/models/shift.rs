//! Network predictions for a gap and the anchor-based offset correction.

use ndarray::Array1;
use serde::{Deserialize, Serialize};

use super::mlp::MlpParams;
use super::train::{train, TrainConfig, Trained};
use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::preprocess::ColumnScale;
use crate::well_io::{flank_lengths, Curve, GapSpec};

/// Anything that predicts the target, in target units, for feature rows.
pub trait RowPredictor {
    fn predict_rows(&self, features: &FeatureMatrix, rows: &[usize]) -> Result<Vec<f64>>;
}

/// A trained network plus the scaling of its target curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub params: MlpParams,
    pub target_scale: ColumnScale,
}

impl TrainedModel {
    /// Standardizes the observed target and trains on those rows.
    pub fn fit(features: &FeatureMatrix, target: &Curve, config: &TrainConfig) -> Result<(Self, Vec<f64>)> {
        let target_scale = ColumnScale::fit(target)?;
        let scaled = target.with_values(target.values.iter().map(|v| v.map(|x| target_scale.apply(x))).collect());
        let Trained { params, epoch_losses } = train(features, &scaled, config)?;
        Ok((Self { params, target_scale }, epoch_losses))
    }
}

impl RowPredictor for TrainedModel {
    fn predict_rows(&self, features: &FeatureMatrix, rows: &[usize]) -> Result<Vec<f64>> {
        if rows.is_empty() {
            return Ok(Vec::new());
        }
        let x = features.select_rows(rows)?;
        let z: Array1<f64> = self.params.predict(&x)?;
        Ok(z.iter().map(|&v| self.target_scale.invert(v)).collect())
    }
}

/// Inference-mode predictions for every index of `gap`.
pub fn predict_gap<P: RowPredictor + ?Sized>(model: &P, features: &FeatureMatrix, gap: &GapSpec) -> Result<Vec<f64>> {
    let rows: Vec<usize> = gap.indices().collect();
    model.predict_rows(features, &rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedPrediction {
    pub values: Vec<f64>,
    pub shift: f64,
    pub anchors_used: usize,
}

/// Observed rows adjacent to the gap: up to `anchor_k` per side, nearest first.
pub fn anchor_rows(curve: &Curve, gap: &GapSpec, anchor_k: usize) -> Vec<usize> {
    let (left, right) = flank_lengths(curve, gap);
    let left = left.min(anchor_k);
    let right = right.min(anchor_k);
    (gap.start - left..gap.start)
        .chain(gap.end()..gap.end() + right)
        .collect()
}

/// Gap predictions plus the mean `(true − predicted)` over the anchor rows.
pub fn shift_correct<P: RowPredictor + ?Sized>(
    model: &P,
    features: &FeatureMatrix,
    curve: &Curve,
    gap: &GapSpec,
    anchor_k: usize,
) -> Result<ShiftedPrediction> {
    if anchor_k == 0 {
        return Err(Error::InvalidConfig("anchor_k must be >= 1".into()));
    }
    let anchors = anchor_rows(curve, gap, anchor_k);
    if anchors.is_empty() {
        return Err(Error::TooFewAnchors {
            start: gap.start,
            required: 1,
            left: 0,
            right: 0,
        });
    }
    let predicted = model.predict_rows(features, &anchors)?;
    let residual_sum: f64 = anchors
        .iter()
        .zip(&predicted)
        .map(|(&i, p)| curve.values[i].expect("anchor rows are observed") - p)
        .sum();
    let shift = residual_sum / anchors.len() as f64;
    let values = predict_gap(model, features, gap)?
        .into_iter()
        .map(|v| v + shift)
        .collect();
    Ok(ShiftedPrediction {
        values,
        shift,
        anchors_used: anchors.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    /// Predicts `truth[i] − offset` regardless of features.
    struct Offset {
        truth: Vec<f64>,
        offset: f64,
    }

    impl RowPredictor for Offset {
        fn predict_rows(&self, _: &FeatureMatrix, rows: &[usize]) -> Result<Vec<f64>> {
            Ok(rows.iter().map(|&i| self.truth[i] - self.offset).collect())
        }
    }

    fn setup(len: usize, gap: &GapSpec) -> (FeatureMatrix, Vec<f64>, Curve) {
        let truth: Vec<f64> = (0..len).map(|i| 50.0 + 10.0 * (i as f64 * 0.3).sin()).collect();
        let values = (0..len)
            .map(|i| {
                if gap.indices().contains(&i) {
                    None
                } else {
                    Some(truth[i])
                }
            })
            .collect();
        let fm = FeatureMatrix {
            column_names: vec!["x".into()],
            data: Array2::zeros((len, 1)),
            row_index: (0..len).collect(),
        };
        (fm, truth, Curve::new("GR", "API", values))
    }

    #[test]
    fn exact_predictor_needs_no_shift() {
        let gap = GapSpec::new("GR", 30, 8);
        let (fm, truth, curve) = setup(80, &gap);
        let p = Offset {
            truth: truth.clone(),
            offset: 0.0,
        };
        let out = shift_correct(&p, &fm, &curve, &gap, 10).unwrap();
        assert_eq!(out.shift, 0.0);
        assert_eq!(out.values, truth[30..38].to_vec());
    }

    #[test]
    fn constant_offset_is_recovered() {
        let gap = GapSpec::new("GR", 30, 8);
        let (fm, truth, curve) = setup(80, &gap);
        let c = 3.75;
        let p = Offset {
            truth: truth.clone(),
            offset: c,
        };
        let out = shift_correct(&p, &fm, &curve, &gap, 10).unwrap();
        assert!((out.shift - c).abs() <= 1e-12);
        let anchors = anchor_rows(&curve, &gap, 10);
        let residual: f64 = anchors
            .iter()
            .map(|&i| truth[i] - (truth[i] - c + out.shift))
            .sum::<f64>()
            / anchors.len() as f64;
        assert!(residual.abs() <= 1e-12);
    }

    #[test]
    fn short_flank_is_truncated() {
        let gap = GapSpec::new("GR", 3, 5);
        let (fm, truth, curve) = setup(12, &gap);
        let p = Offset { truth, offset: 1.0 };
        let out = shift_correct(&p, &fm, &curve, &gap, 10).unwrap();
        assert_eq!(out.anchors_used, 3 + 4);
    }

    #[test]
    fn no_anchors_is_an_error() {
        let gap = GapSpec::new("GR", 0, 12);
        let (fm, truth, curve) = setup(12, &gap);
        let p = Offset { truth, offset: 1.0 };
        assert!(matches!(
            shift_correct(&p, &fm, &curve, &gap, 10),
            Err(Error::TooFewAnchors { .. })
        ));
    }
}
