use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::derive_seed;
use crate::well_io::{Curve, GapSpec, WellLog};

/// Observed samples kept on each side of an injected gap, so that every
/// method (including two-anchor cubic and the shift anchors) has support.
pub const INJECT_FLANK: usize = 10;

/// One held-out segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalCase {
    pub gap: GapSpec,
    pub truth: Vec<f64>,
    pub trial_seed: u64,
}

fn longest_observed_run(curve: &Curve) -> usize {
    let mut best = 0;
    let mut run = 0;
    for v in &curve.values {
        run = if v.is_some() { run + 1 } else { 0 };
        best = best.max(run);
    }
    best
}

/// Places `trials_per_length` gaps of each length on observed stretches of
/// the target. All returned cases are pairwise disjoint and separated by at
/// least [`INJECT_FLANK`] observed samples from each other and from real gaps.
pub fn inject_gaps(
    well: &WellLog,
    target: &str,
    lengths: &[usize],
    trials_per_length: usize,
    seed: u64,
) -> Result<Vec<EvalCase>> {
    let curve = well.curve(target)?;
    let n = curve.len();
    let longest = longest_observed_run(curve);
    if let Some(&length) = lengths.iter().find(|&&l| l == 0) {
        return Err(Error::GapPlacement {
            length,
            reason: "gap length must be >= 1".into(),
        });
    }
    if let Some(&length) = lengths.iter().find(|&&l| l + 2 * INJECT_FLANK > longest) {
        return Err(Error::GapPlacement {
            length,
            reason: format!(
                "longest observed run of {target} is {longest} samples; at most {} can be held out",
                longest.saturating_sub(2 * INJECT_FLANK)
            ),
        });
    }

    let mut blocked: Vec<bool> = curve.values.iter().map(Option::is_none).collect();
    // Place longest first; report in the caller's order.
    let mut order: Vec<usize> = (0..lengths.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(lengths[i]));
    let mut placed: Vec<Vec<EvalCase>> = vec![Vec::new(); lengths.len()];
    for li in order {
        let length = lengths[li];
        let span = length + 2 * INJECT_FLANK;
        for trial in 0..trials_per_length {
            let trial_seed = derive_seed(seed, &[length as u64, trial as u64]);
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
            let mut prefix = Vec::with_capacity(n + 1);
            prefix.push(0usize);
            for &b in &blocked {
                prefix.push(prefix.last().unwrap() + b as usize);
            }
            // Window [s − flank, s + length + flank) must be free.
            let candidates: Vec<usize> = (INJECT_FLANK..=n.saturating_sub(length + INJECT_FLANK))
                .filter(|&s| prefix[s - INJECT_FLANK + span] == prefix[s - INJECT_FLANK])
                .collect();
            if candidates.is_empty() {
                return Err(Error::GapPlacement {
                    length,
                    reason: format!(
                        "no free stretch left after {} placements",
                        placed.iter().map(Vec::len).sum::<usize>()
                    ),
                });
            }
            let start = candidates[rng.random_range(0..candidates.len())];
            blocked[start..start + length].fill(true);
            placed[li].push(EvalCase {
                gap: GapSpec::new(target, start, length),
                truth: curve.values[start..start + length].iter().map(|v| v.unwrap()).collect(),
                trial_seed,
            });
        }
    }
    Ok(placed.into_iter().flatten().collect())
}

/// Copy of `curve` with every case masked out.
pub fn mask_cases(curve: &Curve, cases: &[EvalCase]) -> Curve {
    let mut values = curve.values.clone();
    for case in cases {
        values[case.gap.indices()].fill(None);
    }
    curve.with_values(values)
}
