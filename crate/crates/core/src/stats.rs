//! Small numeric helpers shared across modules.

/// Linear-interpolation quantile of an ascending slice, position `q·(n−1)`.
///
/// The result is clamped to its bracketing order statistics so it is
/// monotone in `q` even under rounding.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let (a, b) = (sorted[lo], sorted[hi]);
    let frac = pos - lo as f64;
    (a + frac * (b - a)).clamp(a, b)
}

/// The `len` interior points of the straight line from `left` to `right`,
/// which sit at unit spacing `len + 1` apart.
pub fn lerp_segment(left: f64, right: f64, len: usize) -> impl Iterator<Item = f64> {
    let span = (len + 1) as f64;
    (1..=len).map(move |j| left + (right - left) * (j as f64 / span))
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (n−1); zero for fewer than two values.
pub fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Platform-independent seed derivation from a base seed and integer keys.
pub fn derive_seed(base: u64, keys: &[u64]) -> u64 {
    keys.iter().fold(mix64(base), |acc, &k| mix64(acc ^ mix64(k)))
}
