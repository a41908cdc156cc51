use serde::{Deserialize, Serialize};

use super::{detect_gaps, GapSpec, GapStats, WellLog};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSummary {
    pub mnemonic: String,
    pub unit: String,
    #[serde(flatten)]
    pub stats: GapStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WellSummary {
    pub well_id: String,
    pub rows: usize,
    pub depth_start: f64,
    pub depth_stop: f64,
    pub step: f64,
    pub curves: Vec<CurveSummary>,
}

pub fn summarize_well(well: &WellLog) -> WellSummary {
    let depths = well.depths();
    WellSummary {
        well_id: well.well_id.clone(),
        rows: well.len(),
        depth_start: depths[0],
        depth_stop: depths[depths.len() - 1],
        step: well.step(),
        curves: well
            .curves()
            .map(|c| CurveSummary {
                mnemonic: c.mnemonic.clone(),
                unit: c.unit.clone(),
                stats: GapStats::from_gaps(&detect_gaps(c)),
            })
            .collect(),
    }
}

/// Pooled statistics over every gap of every curve of every well, or only of
/// curves named `mnemonic` when given.
pub fn pooled_gap_stats(wells: &[WellLog], mnemonic: Option<&str>) -> GapStats {
    let gaps: Vec<GapSpec> = wells
        .iter()
        .flat_map(|w| w.curves())
        .filter(|c| mnemonic.is_none_or(|m| c.mnemonic == m))
        .flat_map(detect_gaps)
        .collect();
    GapStats::from_gaps(&gaps)
}
