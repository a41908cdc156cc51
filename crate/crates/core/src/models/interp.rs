//! Interpolation baselines over the sample index.

use crate::error::{Error, Result};
use crate::stats::lerp_segment;
use crate::well_io::{flank_lengths, Curve, GapSpec};

fn anchor(curve: &Curve, i: usize, gap: &GapSpec) -> Result<f64> {
    curve.values.get(i).copied().flatten().ok_or(Error::UnanchoredGap {
        start: gap.start,
        length: gap.length,
    })
}

/// Straight line between the two samples flanking the gap.
pub fn linear_interpolate(curve: &Curve, gap: &GapSpec) -> Result<Vec<f64>> {
    if gap.start == 0 {
        return Err(Error::UnanchoredGap {
            start: gap.start,
            length: gap.length,
        });
    }
    let left = anchor(curve, gap.start - 1, gap)?;
    let right = anchor(curve, gap.end(), gap)?;
    Ok(lerp_segment(left, right, gap.length).collect())
}

/// Cubic through the two nearest observed samples on each side of the gap,
/// evaluated in Lagrange form.
pub fn cubic_interpolate(curve: &Curve, gap: &GapSpec) -> Result<Vec<f64>> {
    let (left, right) = flank_lengths(curve, gap);
    if gap.start < 2 || left < 2 || right < 2 {
        return Err(Error::TooFewAnchors {
            start: gap.start,
            required: 2,
            left,
            right,
        });
    }
    // Positions relative to the first anchor keep the products small.
    let s = gap.start;
    let e = gap.end();
    let xs = [0.0, 1.0, (e - s + 2) as f64, (e - s + 3) as f64];
    let ys = [
        anchor(curve, s - 2, gap)?,
        anchor(curve, s - 1, gap)?,
        anchor(curve, e, gap)?,
        anchor(curve, e + 1, gap)?,
    ];
    let weights: [f64; 4] = std::array::from_fn(|j| {
        let denom: f64 = (0..4).filter(|&m| m != j).map(|m| xs[j] - xs[m]).product();
        ys[j] / denom
    });
    Ok((0..gap.length)
        .map(|i| {
            let x = (i + 2) as f64;
            (0..4)
                .map(|j| {
                    let basis: f64 = (0..4).filter(|&m| m != j).map(|m| x - xs[m]).product();
                    weights[j] * basis
                })
                .sum()
        })
        .collect())
}
