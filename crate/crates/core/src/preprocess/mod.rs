//! Curve transforms applied before feature generation: standard scaling,
//! `ln(1+x)` for heavy-tailed resistivity, and Fourier high-pass detrending.

pub mod fft;

pub use fft::{dft, idft, inverse_complex};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::lerp_segment;
use crate::well_io::{Curve, WellLog};

/// Mean and population standard deviation of one column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnScale {
    pub name: String,
    pub mean: f64,
    pub std: f64,
}

impl ColumnScale {
    pub fn apply(&self, x: f64) -> f64 {
        (x - self.mean) / self.std
    }

    pub fn invert(&self, z: f64) -> f64 {
        z * self.std + self.mean
    }

    /// Fits on the observed samples of `curve`.
    pub fn fit(curve: &Curve) -> Result<Self> {
        let (mut count, mut mean, mut m2) = (0usize, 0.0f64, 0.0f64);
        for v in curve.values.iter().flatten() {
            count += 1;
            let delta = v - mean;
            mean += delta / count as f64;
            m2 += delta * (v - mean);
        }
        if count < 2 {
            return Err(Error::TooFewSamples {
                column: curve.mnemonic.clone(),
                found: count,
                required: 2,
            });
        }
        let std = (m2 / count as f64).sqrt();
        if !(std > 1e-12 * mean.abs().max(1.0)) {
            return Err(Error::ZeroVariance(curve.mnemonic.clone()));
        }
        Ok(Self {
            name: curve.mnemonic.clone(),
            mean,
            std,
        })
    }
}

/// Per-column standardization parameters, in column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalerParams {
    pub columns: Vec<ColumnScale>,
}

impl ScalerParams {
    pub fn column(&self, name: &str) -> Option<&ColumnScale> {
        self.columns.iter().find(|c| c.name == name)
    }
}

/// Fits one [`ColumnScale`] per curve; missing samples are excluded.
pub fn fit_scaler(columns: &[&Curve]) -> Result<ScalerParams> {
    Ok(ScalerParams {
        columns: columns.iter().map(|c| ColumnScale::fit(c)).collect::<Result<_>>()?,
    })
}

fn map_columns(params: &ScalerParams, columns: &[Curve], f: impl Fn(&ColumnScale, f64) -> f64) -> Result<Vec<Curve>> {
    if columns.len() != params.columns.len() {
        return Err(Error::DimensionMismatch {
            expected: params.columns.len(),
            found: columns.len(),
        });
    }
    Ok(params
        .columns
        .iter()
        .zip(columns)
        .map(|(p, c)| c.with_values(c.values.iter().map(|v| v.map(|x| f(p, x))).collect()))
        .collect())
}

pub fn scale(params: &ScalerParams, columns: &[Curve]) -> Result<Vec<Curve>> {
    map_columns(params, columns, ColumnScale::apply)
}

pub fn unscale(params: &ScalerParams, columns: &[Curve]) -> Result<Vec<Curve>> {
    map_columns(params, columns, ColumnScale::invert)
}

/// `ln(1+x)` on observed samples.
pub fn log1p_curve(curve: &Curve) -> Result<Curve> {
    let mut values = Vec::with_capacity(curve.len());
    for (index, v) in curve.values.iter().enumerate() {
        values.push(match *v {
            Some(x) if x <= -1.0 => return Err(Error::LogDomain { index, value: x }),
            Some(x) => Some(x.ln_1p()),
            None => None,
        });
    }
    Ok(curve.with_values(values))
}

/// Dense copy of `curve`: interior gaps filled on the straight line between
/// their anchors, leading/trailing gaps padded with the nearest observation.
pub fn fill_gaps(curve: &Curve) -> Result<Vec<f64>> {
    let first = curve
        .values
        .iter()
        .position(Option::is_some)
        .ok_or_else(|| Error::AllMissing(curve.mnemonic.clone()))?;
    let mut out = Vec::with_capacity(curve.len());
    let lead = curve.values[first].unwrap();
    out.resize(first, lead);
    let mut last_obs = (first, lead);
    for i in first..curve.len() {
        if let Some(v) = curve.values[i] {
            let (li, lv) = last_obs;
            if i > li + 1 {
                out.extend(lerp_segment(lv, v, i - li - 1));
            }
            out.push(v);
            last_obs = (i, v);
        }
    }
    out.resize(curve.len(), last_obs.1);
    Ok(out)
}

/// Number of lowest-frequency bins removed by [`fourier_detrend`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetrendConfig {
    pub cutoff: usize,
}

impl Default for DetrendConfig {
    fn default() -> Self {
        Self { cutoff: 5 }
    }
}

/// High-pass filter of a dense series: zero bins `0..cutoff` and their mirrors.
pub fn detrend_values(values: &[f64], config: DetrendConfig) -> Result<Vec<f64>> {
    let n = values.len();
    let cutoff = config.cutoff;
    if cutoff < 1 || 2 * cutoff >= n {
        return Err(Error::CutoffOutOfRange { cutoff, len: n });
    }
    let mut spectrum = dft(values)?;
    let zero = Complex64::new(0.0, 0.0);
    spectrum[..cutoff].fill(zero);
    spectrum[n - cutoff + 1..].fill(zero);
    // Zeroing mirrored bins keeps the spectrum Hermitian by construction.
    Ok(inverse_complex(&spectrum).into_iter().map(|c| c.re).collect())
}

/// Removes slow trends from a curve. Gaps are filled linearly for the
/// transform and masked again in the output.
pub fn fourier_detrend(curve: &Curve, config: DetrendConfig) -> Result<Curve> {
    let filled = fill_gaps(curve)?;
    let out = detrend_values(&filled, config)?;
    Ok(curve.with_values(curve.values.iter().zip(out).map(|(orig, y)| orig.map(|_| y)).collect()))
}

/// Which curves receive which transform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreprocessConfig {
    pub log1p: Vec<String>,
    pub detrend: Vec<String>,
    pub detrend_config: DetrendConfig,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self {
            log1p: vec!["ILD".to_string()],
            detrend: vec!["SP".to_string()],
            detrend_config: DetrendConfig::default(),
        }
    }
}

/// Applies log1p then detrending to the configured curves of a copy of `well`.
/// Curves named in the config but absent from the well are skipped.
pub fn preprocess_well(well: &WellLog, config: &PreprocessConfig) -> Result<WellLog> {
    let mut out = well.clone();
    for name in &config.log1p {
        if let Ok(c) = well.curve(name) {
            let t = log1p_curve(c).map_err(|e| e.context(format!("log1p of {name}")))?;
            out.set_curve(t)?;
        }
    }
    for name in &config.detrend {
        if let Ok(c) = out.curve(name) {
            let t = fourier_detrend(c, config.detrend_config).map_err(|e| e.context(format!("detrend of {name}")))?;
            out.set_curve(t)?;
        }
    }
    Ok(out)
}
