//! Well-log containers, gap detection, and LAS/CSV text formats.
//!
//! A [`WellLog`] is a uniformly sampled depth axis plus an ordered set of
//! [`Curve`]s. Missing samples are `None`, so they can never collide with a
//! finite reading.

mod delimited;
mod las;
mod summary;

pub use delimited::{parse_csv, write_csv, CsvConfig};
pub use las::{parse_las, write_las, DEFAULT_NULL_SENTINEL};
pub use summary::{pooled_gap_stats, summarize_well, CurveSummary, WellSummary};

use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Text formats [`read_well`] and [`write_well`] understand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Las,
    Csv,
}

impl Format {
    /// `.csv` (any case) is CSV; everything else is treated as LAS.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Las,
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

/// Reads a LAS or CSV file; CSV wells take their id from the file stem.
pub fn read_well(path: &Path) -> Result<WellLog> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let parsed = match Format::from_path(path) {
        Format::Las => parse_las(&text, DEFAULT_NULL_SENTINEL),
        Format::Csv => {
            let well_id = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            parse_csv(
                &text,
                &CsvConfig {
                    well_id,
                    ..CsvConfig::default()
                },
            )
        }
    };
    parsed.map_err(|e| e.context(path.display().to_string()))
}

pub fn write_well(path: &Path, well: &WellLog) -> Result<()> {
    let text = match Format::from_path(path) {
        Format::Las => write_las(well),
        Format::Csv => write_csv(well, CsvConfig::default().null_token.as_str()),
    };
    std::fs::write(path, text).map_err(|e| io_error(path, e))
}

/// Relative tolerance on the depth step.
pub const STEP_TOLERANCE: f64 = 1e-6;

/// One measurement channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub mnemonic: String,
    pub unit: String,
    pub values: Vec<Option<f64>>,
}

impl Curve {
    pub fn new(mnemonic: impl Into<String>, unit: impl Into<String>, values: Vec<Option<f64>>) -> Self {
        Self {
            mnemonic: mnemonic.into(),
            unit: unit.into(),
            values,
        }
    }

    /// Fully observed curve.
    pub fn from_values(mnemonic: impl Into<String>, unit: impl Into<String>, values: &[f64]) -> Self {
        Self::new(mnemonic, unit, values.iter().copied().map(Some).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_missing(&self, i: usize) -> bool {
        self.values[i].is_none()
    }

    pub fn missing_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }

    /// Observed values in depth order.
    pub fn observed(&self) -> Vec<f64> {
        self.values.iter().flatten().copied().collect()
    }

    /// Returns the values as a dense vector if nothing is missing.
    pub fn dense(&self) -> Option<Vec<f64>> {
        self.values.iter().copied().collect()
    }

    /// Same curve with new values, keeping mnemonic and unit.
    pub fn with_values(&self, values: Vec<Option<f64>>) -> Self {
        Self {
            mnemonic: self.mnemonic.clone(),
            unit: self.unit.clone(),
            values,
        }
    }
}

/// A depth-indexed collection of curves from one well.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WellLog {
    pub well_id: String,
    depths: Vec<f64>,
    curves: IndexMap<String, Curve>,
    step: f64,
}

impl WellLog {
    /// Validates depths (strictly increasing, uniform step) and curve lengths.
    pub fn new(well_id: impl Into<String>, depths: Vec<f64>, curves: Vec<Curve>) -> Result<Self> {
        let step = validate_depths(&depths)?;
        let mut map = IndexMap::with_capacity(curves.len());
        for curve in curves {
            if curve.len() != depths.len() {
                return Err(Error::LengthMismatch {
                    found: curve.len(),
                    mnemonic: curve.mnemonic,
                    expected: depths.len(),
                });
            }
            if map.contains_key(&curve.mnemonic) {
                return Err(Error::DuplicateCurve(curve.mnemonic));
            }
            map.insert(curve.mnemonic.clone(), curve);
        }
        Ok(Self {
            well_id: well_id.into(),
            depths,
            curves: map,
            step,
        })
    }

    pub fn depths(&self) -> &[f64] {
        &self.depths
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.depths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depths.is_empty()
    }

    pub fn curves(&self) -> impl Iterator<Item = &Curve> {
        self.curves.values()
    }

    pub fn mnemonics(&self) -> impl Iterator<Item = &str> {
        self.curves.keys().map(String::as_str)
    }

    pub fn curve(&self, mnemonic: &str) -> Result<&Curve> {
        self.curves
            .get(mnemonic)
            .ok_or_else(|| Error::UnknownCurve(mnemonic.to_string()))
    }

    /// Replaces an existing curve or appends a new one.
    pub fn set_curve(&mut self, curve: Curve) -> Result<()> {
        if curve.len() != self.depths.len() {
            return Err(Error::LengthMismatch {
                found: curve.len(),
                mnemonic: curve.mnemonic,
                expected: self.depths.len(),
            });
        }
        self.curves.insert(curve.mnemonic.clone(), curve);
        Ok(())
    }
}

fn validate_depths(depths: &[f64]) -> Result<f64> {
    if depths.is_empty() {
        return Err(Error::NoDataRows);
    }
    for (i, d) in depths.iter().enumerate() {
        if !d.is_finite() {
            return Err(Error::NonFinite(format!("depth at row {i}")));
        }
    }
    for (i, w) in depths.windows(2).enumerate() {
        if w[1] <= w[0] {
            return Err(Error::NonMonotoneDepth {
                row: i + 1,
                prev: w[0],
                next: w[1],
            });
        }
    }
    if depths.len() < 2 {
        return Ok(0.0);
    }
    // Mean step is less sensitive to decimal rounding in the file than the first difference.
    let step = (depths[depths.len() - 1] - depths[0]) / (depths.len() - 1) as f64;
    for (i, w) in depths.windows(2).enumerate() {
        let found = w[1] - w[0];
        if (found - step).abs() > STEP_TOLERANCE * step {
            return Err(Error::NonUniformStep {
                row: i + 1,
                expected: step,
                found,
            });
        }
    }
    Ok(step)
}

/// A maximal run of consecutive missing samples in one curve.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GapSpec {
    pub mnemonic: String,
    pub start: usize,
    pub length: usize,
}

impl GapSpec {
    pub fn new(mnemonic: impl Into<String>, start: usize, length: usize) -> Self {
        Self {
            mnemonic: mnemonic.into(),
            start,
            length,
        }
    }

    /// One past the last missing index.
    pub fn end(&self) -> usize {
        self.start + self.length
    }

    /// True when both flanking samples exist inside a series of `series_len`.
    pub fn is_anchored(&self, series_len: usize) -> bool {
        self.start > 0 && self.end() < series_len
    }

    pub fn indices(&self) -> std::ops::Range<usize> {
        self.start..self.end()
    }
}

/// Summary of the gaps in one curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapStats {
    pub gap_count: usize,
    pub max_run: usize,
    pub mean_run: f64,
}

impl GapStats {
    pub fn from_gaps(gaps: &[GapSpec]) -> Self {
        let gap_count = gaps.len();
        let max_run = gaps.iter().map(|g| g.length).max().unwrap_or(0);
        let total: usize = gaps.iter().map(|g| g.length).sum();
        let mean_run = if gap_count == 0 {
            0.0
        } else {
            total as f64 / gap_count as f64
        };
        Self {
            gap_count,
            max_run,
            mean_run,
        }
    }
}

/// Maximal missing runs of `curve`, sorted by start.
pub fn detect_gaps(curve: &Curve) -> Vec<GapSpec> {
    let mut gaps = Vec::new();
    let mut run_start = None;
    for (i, v) in curve.values.iter().enumerate() {
        match (v.is_none(), run_start) {
            (true, None) => run_start = Some(i),
            (false, Some(s)) => {
                gaps.push(GapSpec::new(curve.mnemonic.clone(), s, i - s));
                run_start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = run_start {
        gaps.push(GapSpec::new(curve.mnemonic.clone(), s, curve.len() - s));
    }
    gaps
}

pub fn gap_stats(well: &WellLog, mnemonic: &str) -> Result<GapStats> {
    let curve = well.curve(mnemonic)?;
    Ok(GapStats::from_gaps(&detect_gaps(curve)))
}

/// Number of consecutive observed samples immediately left and right of a gap.
pub fn flank_lengths(curve: &Curve, gap: &GapSpec) -> (usize, usize) {
    let left = curve.values[..gap.start]
        .iter()
        .rev()
        .take_while(|v| v.is_some())
        .count();
    let right = curve.values[gap.end().min(curve.len())..]
        .iter()
        .take_while(|v| v.is_some())
        .count();
    (left, right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mask_curve(mask: &[bool]) -> Curve {
        Curve::new(
            "GR",
            "API",
            mask.iter()
                .enumerate()
                .map(|(i, &m)| if m { None } else { Some(i as f64) })
                .collect(),
        )
    }

    #[test]
    fn fully_observed_has_no_gaps() {
        let c = Curve::from_values("GR", "API", &[1.0, 2.0, 3.0]);
        assert!(detect_gaps(&c).is_empty());
    }

    #[test]
    fn runs_are_maximal() {
        let c = mask_curve(&[false, true, true, false, true]);
        let gaps = detect_gaps(&c);
        assert_eq!(gaps, vec![GapSpec::new("GR", 1, 2), GapSpec::new("GR", 4, 1)]);
        assert!(gaps[0].is_anchored(5));
        assert!(!gaps[1].is_anchored(5));
    }

    #[test]
    fn stats_arithmetic() {
        let c = mask_curve(&[false, true, true, false, true, false]);
        let well = WellLog::new("w", (0..6).map(|i| i as f64).collect(), vec![c]).unwrap();
        let s = gap_stats(&well, "GR").unwrap();
        assert_eq!((s.gap_count, s.max_run, s.mean_run), (2, 2, 1.5));

        let clean = WellLog::new("w", vec![0.0, 1.0], vec![Curve::from_values("GR", "", &[1.0, 2.0])]).unwrap();
        let s = gap_stats(&clean, "GR").unwrap();
        assert_eq!((s.gap_count, s.max_run, s.mean_run), (0, 0, 0.0));
        assert_eq!(gap_stats(&clean, "RHOB"), Err(Error::UnknownCurve("RHOB".into())));
    }

    #[test]
    fn rejects_bad_depths() {
        let c = || vec![Curve::from_values("GR", "", &[1.0, 2.0, 3.0])];
        assert!(matches!(
            WellLog::new("w", vec![0.0, 1.0, 0.5], c()),
            Err(Error::NonMonotoneDepth { row: 2, .. })
        ));
        assert!(matches!(
            WellLog::new("w", vec![0.0, 1.0, 2.5], c()),
            Err(Error::NonUniformStep { .. })
        ));
        assert!(matches!(
            WellLog::new("w", vec![0.0, 1.0], c()),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn flanks_stop_at_missing() {
        let c = mask_curve(&[true, false, false, true, true, false, true]);
        let gap = GapSpec::new("GR", 3, 2);
        assert_eq!(flank_lengths(&c, &gap), (2, 1));
    }

    fn brute_force_gaps(mask: &[bool]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < mask.len() {
            if mask[i] {
                let mut j = i;
                while j < mask.len() && mask[j] {
                    j += 1;
                }
                out.push((i, j - i));
                i = j;
            } else {
                i += 1;
            }
        }
        out
    }

    #[test]
    fn matches_linear_scan_on_long_random_mask() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mask: Vec<bool> = (0..10_000).map(|_| rng.random_bool(0.3)).collect();
        let got: Vec<_> = detect_gaps(&mask_curve(&mask))
            .into_iter()
            .map(|g| (g.start, g.length))
            .collect();
        assert_eq!(got, brute_force_gaps(&mask));
    }

    proptest! {
        #[test]
        fn gaps_cover_exactly_the_missing_mask(mask in proptest::collection::vec(any::<bool>(), 0..200)) {
            let c = mask_curve(&mask);
            let gaps = detect_gaps(&c);
            let total: usize = gaps.iter().map(|g| g.length).sum();
            prop_assert_eq!(total, c.missing_count());
            for g in &gaps {
                prop_assert!(g.indices().all(|i| mask[i]));
                if g.start > 0 {
                    prop_assert!(!mask[g.start - 1]);
                }
                if g.end() < mask.len() {
                    prop_assert!(!mask[g.end()]);
                }
            }
            for w in gaps.windows(2) {
                prop_assert!(w[0].end() < w[1].start);
            }
        }
    }
}
