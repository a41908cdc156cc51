//! Per-depth predictor rows: scaled raw values, sliding-window quantiles and
//! lag/lead copies of each predictor curve.

use ndarray::{Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preprocess::{fill_gaps, fit_scaler, preprocess_well, PreprocessConfig, ScalerParams};
use crate::stats::quantile_sorted;
use crate::well_io::WellLog;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FeatureConfig {
    /// Lag and lead samples per side.
    pub window_n: usize,
    /// Half-widths `k` of the quantile windows (`2k+1` samples).
    pub quantile_windows: Vec<usize>,
    pub quantile_orders: Vec<f64>,
    pub predictors: Vec<String>,
    pub target: String,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            window_n: 5,
            quantile_windows: vec![5, 15],
            quantile_orders: vec![0.1, 0.5, 0.9],
            predictors: ["RHOB", "SP", "ILD", "DT"].map(String::from).to_vec(),
            target: "GR".to_string(),
        }
    }
}

impl FeatureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.predictors.is_empty() {
            return Err(Error::InvalidConfig("no predictor curves".into()));
        }
        if self.predictors.contains(&self.target) {
            return Err(Error::InvalidConfig(format!(
                "target {} cannot also be a predictor",
                self.target
            )));
        }
        if self.quantile_windows.contains(&0) {
            return Err(Error::InvalidConfig("quantile half-width must be >= 1".into()));
        }
        if let Some(&q) = self.quantile_orders.iter().find(|q| !(0.0..=1.0).contains(*q)) {
            return Err(Error::QuantileOrder(q));
        }
        Ok(())
    }

    /// Number of columns [`build_feature_matrix`] produces.
    pub fn column_count(&self) -> usize {
        let p = self.predictors.len();
        p * (1 + self.quantile_windows.len() * self.quantile_orders.len() + 2 * self.window_n)
    }
}

/// One row per depth index, no missing entries.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub column_names: Vec<String>,
    pub data: Array2<f64>,
    pub row_index: Vec<usize>,
}

impl FeatureMatrix {
    pub fn n_rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn n_cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.data.row(i)
    }

    /// Rows `indices` stacked into a new matrix.
    pub fn select_rows(&self, indices: &[usize]) -> Result<Array2<f64>> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.n_rows()) {
            return Err(Error::MissingFeatureRow(bad));
        }
        Ok(self.data.select(ndarray::Axis(0), indices))
    }
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite(format!("sample {i}"))),
        None => Ok(()),
    }
}

/// Sliding-window quantiles for several orders at once. Windows are
/// `[i−k, i+k]` truncated at the series ends.
pub fn quantile_smooth_multi(values: &[f64], k: usize, orders: &[f64]) -> Result<Vec<Vec<f64>>> {
    if let Some(&q) = orders.iter().find(|q| !(0.0..=1.0).contains(*q)) {
        return Err(Error::QuantileOrder(q));
    }
    if k == 0 {
        return Err(Error::InvalidConfig("quantile half-width must be >= 1".into()));
    }
    check_finite(values)?;
    let n = values.len();
    let mut out = vec![Vec::with_capacity(n); orders.len()];
    let mut window: Vec<f64> = Vec::with_capacity(2 * k + 1);
    let insert = |w: &mut Vec<f64>, v: f64| {
        let pos = w.partition_point(|x| x.total_cmp(&v).is_lt());
        w.insert(pos, v);
    };
    for &v in &values[..n.min(k + 1)] {
        insert(&mut window, v);
    }
    for i in 0..n {
        for (col, &q) in out.iter_mut().zip(orders) {
            col.push(quantile_sorted(&window, q));
        }
        if i + k + 1 < n {
            insert(&mut window, values[i + k + 1]);
        }
        if i >= k {
            let v = values[i - k];
            let pos = window.partition_point(|x| x.total_cmp(&v).is_lt());
            window.remove(pos);
        }
    }
    Ok(out)
}

pub fn quantile_smooth(values: &[f64], k: usize, q: f64) -> Result<Vec<f64>> {
    Ok(quantile_smooth_multi(values, k, &[q])?.pop().unwrap())
}

/// `2n` columns: `lag_1..lag_n` then `lead_1..lead_n`, clamped at the ends.
pub fn window_features(values: &[f64], n: usize) -> Result<Vec<Vec<f64>>> {
    let len = values.len();
    if n == 0 || n >= len {
        return Err(Error::WindowTooLarge { n, len });
    }
    let last = len - 1;
    let lags = (1..=n).map(|j| (0..len).map(|i| values[i.saturating_sub(j)]).collect());
    let leads = (1..=n).map(|j| (0..len).map(|i| values[(i + j).min(last)]).collect());
    Ok(lags.chain(leads).collect())
}

/// Scales, gap-fills and expands the predictor curves of an already
/// preprocessed well.
pub fn build_feature_matrix(well: &WellLog, config: &FeatureConfig, scaler: &ScalerParams) -> Result<FeatureMatrix> {
    config.validate()?;
    let mut base = Vec::with_capacity(config.predictors.len());
    for name in &config.predictors {
        let curve = well.curve(name)?;
        let scale = scaler.column(name).ok_or_else(|| Error::UnknownCurve(name.clone()))?;
        let scaled = curve.with_values(curve.values.iter().map(|v| v.map(|x| scale.apply(x))).collect());
        base.push(fill_gaps(&scaled)?);
    }

    let mut names = Vec::with_capacity(config.column_count());
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(config.column_count());
    for (name, values) in config.predictors.iter().zip(&base) {
        names.push(name.clone());
        columns.push(values.clone());
    }
    for (name, values) in config.predictors.iter().zip(&base) {
        for &k in &config.quantile_windows {
            let smoothed = quantile_smooth_multi(values, k, &config.quantile_orders)?;
            for (&q, col) in config.quantile_orders.iter().zip(smoothed) {
                names.push(format!("{name}_q{q}_k{k}"));
                columns.push(col);
            }
        }
    }
    if config.window_n > 0 {
        for (name, values) in config.predictors.iter().zip(&base) {
            let cols = window_features(values, config.window_n)?;
            let n = config.window_n;
            names.extend((1..=n).map(|j| format!("{name}_lag{j}")));
            names.extend((1..=n).map(|j| format!("{name}_lead{j}")));
            columns.extend(cols);
        }
    }

    let rows = well.len();
    let mut data = Array2::zeros((rows, columns.len()));
    for (j, col) in columns.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            data[[i, j]] = *v;
        }
    }
    Ok(FeatureMatrix {
        column_names: names,
        data,
        row_index: (0..rows).collect(),
    })
}

/// Full predictor path: transforms, scaler fit on observed samples, features.
pub fn prepare_features(
    well: &WellLog,
    config: &FeatureConfig,
    preprocess: &PreprocessConfig,
) -> Result<(FeatureMatrix, ScalerParams)> {
    config.validate()?;
    let prepared = preprocess_well(well, preprocess)?;
    let curves = config
        .predictors
        .iter()
        .map(|p| prepared.curve(p))
        .collect::<Result<Vec<_>>>()?;
    let scaler = fit_scaler(&curves)?;
    let features = build_feature_matrix(&prepared, config, &scaler)?;
    Ok((features, scaler))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::well_io::Curve;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    /// Independent oracle: sort each window and interpolate.
    fn window_sort_oracle(values: &[f64], k: usize, q: f64) -> Vec<f64> {
        (0..values.len())
            .map(|i| {
                let lo = i.saturating_sub(k);
                let hi = (i + k).min(values.len() - 1);
                let mut w = values[lo..=hi].to_vec();
                w.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let pos = q * (w.len() - 1) as f64;
                let (l, h) = (pos.floor() as usize, pos.ceil() as usize);
                let v = w[l] + (pos - l as f64) * (w[h] - w[l]);
                v.clamp(w[l], w[h])
            })
            .collect()
    }

    #[test]
    fn median_of_three() {
        let out = quantile_smooth(&[1.0, 5.0, 2.0], 1, 0.5).unwrap();
        assert_eq!(out[1], 2.0);
        assert_eq!(out[0], 3.0); // window {1,5}
    }

    #[test]
    fn constant_curve_is_fixed_point() {
        let out = quantile_smooth(&[4.5; 30], 5, 0.5).unwrap();
        assert!(out.iter().all(|&v| v == 4.5));
    }

    #[test]
    fn q_zero_is_running_min() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let xs: Vec<f64> = (0..500).map(|_| rng.random_range(-10.0..10.0)).collect();
        let out = quantile_smooth(&xs, 4, 0.0).unwrap();
        for (i, v) in out.iter().enumerate() {
            let lo = i.saturating_sub(4);
            let hi = (i + 4).min(xs.len() - 1);
            let min = xs[lo..=hi].iter().copied().fold(f64::INFINITY, f64::min);
            assert_eq!(*v, min);
        }
    }

    #[test]
    fn rejects_bad_order() {
        assert_eq!(quantile_smooth(&[1.0, 2.0], 1, 1.5), Err(Error::QuantileOrder(1.5)));
    }

    #[test]
    fn running_median_matches_sort_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let xs: Vec<f64> = (0..10_000).map(|_| rng.random_range(-1.0..1.0)).collect();
        for k in [1, 7, 30] {
            assert_eq!(quantile_smooth(&xs, k, 0.5).unwrap(), window_sort_oracle(&xs, k, 0.5));
        }
    }

    #[test]
    fn window_indexing() {
        let cols = window_features(&[10.0, 20.0, 30.0], 1).unwrap();
        assert_eq!(cols[0][1], 10.0);
        assert_eq!(cols[1][1], 30.0);
        assert_eq!(cols[0][0], 10.0);
        assert_eq!(cols[1][2], 30.0);
        assert!(window_features(&[1.0, 2.0], 2).is_err());
    }

    #[test]
    fn window_matches_index_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let xs: Vec<f64> = (0..100).map(|_| rng.random()).collect();
        let cols = window_features(&xs, 3).unwrap();
        for j in 1..=3usize {
            for i in 0..100usize {
                let lag = xs[(i as isize - j as isize).max(0) as usize];
                let lead = xs[(i + j).min(99)];
                assert_eq!(cols[j - 1][i], lag);
                assert_eq!(cols[3 + j - 1][i], lead);
            }
        }
    }

    fn small_well(len: usize) -> WellLog {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let curves = ["GR", "RHOB", "SP", "ILD", "DT"]
            .iter()
            .map(|m| {
                let v: Vec<f64> = (0..len).map(|_| rng.random_range(1.0..2.0)).collect();
                Curve::from_values(*m, "", &v)
            })
            .collect();
        WellLog::new("w", (0..len).map(|i| i as f64 * 0.5).collect(), curves).unwrap()
    }

    #[test]
    fn column_counts() {
        let well = small_well(200);
        let raw_only = FeatureConfig {
            window_n: 0,
            quantile_windows: vec![],
            quantile_orders: vec![],
            ..FeatureConfig::default()
        };
        let (fm, _) = prepare_features(&well, &raw_only, &PreprocessConfig::default()).unwrap();
        assert_eq!(fm.n_cols(), 4);
        assert_eq!(fm.n_rows(), 200);

        let cfg = FeatureConfig::default();
        let (fm, _) = prepare_features(&well, &cfg, &PreprocessConfig::default()).unwrap();
        assert_eq!(fm.n_cols(), 4 + 4 * 6 + 4 * 10);
        assert_eq!(fm.column_names.len(), fm.n_cols());
        assert_eq!(fm.column_names[..4], ["RHOB", "SP", "ILD", "DT"]);
        assert_eq!(fm.column_names[4], "RHOB_q0.1_k5");
        assert_eq!(fm.column_names[28], "RHOB_lag1");
        assert_eq!(fm.n_rows(), 200);
        assert!(fm.data.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn config_errors() {
        let well = small_well(50);
        let with_target = FeatureConfig {
            predictors: vec!["GR".into(), "RHOB".into()],
            ..FeatureConfig::default()
        };
        assert!(matches!(
            prepare_features(&well, &with_target, &PreprocessConfig::default()),
            Err(Error::InvalidConfig(_))
        ));
        let missing = FeatureConfig {
            predictors: vec!["NPHI".into()],
            ..FeatureConfig::default()
        };
        assert_eq!(
            prepare_features(&well, &missing, &PreprocessConfig::default()),
            Err(Error::UnknownCurve("NPHI".into()))
        );
    }

    #[test]
    fn config_json_keys() {
        let cfg: FeatureConfig =
            serde_json::from_str(r#"{"window_n": 2, "quantile_windows": [3], "quantile_orders": [0.5], "predictors": ["RHOB"], "target": "GR"}"#)
                .unwrap();
        assert_eq!(cfg.column_count(), 1 + 1 + 4);
        let partial: FeatureConfig = serde_json::from_str(r#"{"window_n": 1}"#).unwrap();
        assert_eq!(partial.predictors.len(), 4);
    }

    proptest! {
        #[test]
        fn monotone_in_order(xs in proptest::collection::vec(-50.0f64..50.0, 1..80), k in 1usize..6, a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
            let (q1, q2) = if a <= b { (a, b) } else { (b, a) };
            let lo = quantile_smooth(&xs, k, q1).unwrap();
            let hi = quantile_smooth(&xs, k, q2).unwrap();
            for (l, h) in lo.iter().zip(&hi) {
                prop_assert!(l <= h);
            }
        }

        #[test]
        fn lags_are_shifted_copies(xs in proptest::collection::vec(-5.0f64..5.0, 8..60), n in 1usize..4) {
            let cols = window_features(&xs, n).unwrap();
            for j in 1..=n {
                for i in j..xs.len() {
                    prop_assert_eq!(cols[j - 1][i], xs[i - j]);
                }
            }
        }
    }
}
