//! Synthetic five-curve wells for benchmarking without field data.
//!
//! Three smooth latent signals (random-phase sinusoid sums) are mixed into
//! the GR, RHOB, SP, ILD and DT channels. SP gets a slow downward drift,
//! ILD is exponentiated, and GR carries an extra slow baseline that none of
//! the other channels sees.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::well_io::{Curve, WellLog};

pub const LATENTS: usize = 3;
pub const CHANNELS: [&str; 5] = ["GR", "RHOB", "SP", "ILD", "DT"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticConfig {
    pub length: usize,
    /// Rows follow [`CHANNELS`]; columns are latent weights.
    pub mixing: Vec<[f64; LATENTS]>,
    /// White noise in standardized channel units.
    pub noise_std: f64,
    /// Shortest and longest latent period, in samples.
    pub latent_periods: (f64, f64),
    pub latent_terms: usize,
    /// Total downward SP drift over the well, in mV.
    pub sp_drift: f64,
    /// Amplitude of the GR-only slow baseline, in standardized units.
    pub gr_baseline: f64,
    pub start_depth: f64,
    pub step: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            length: 20_000,
            mixing: vec![
                [0.8, 0.5, 0.3],
                [-0.6, 0.3, 0.5],
                [0.5, -0.4, 0.2],
                [-0.3, 0.2, 0.7],
                [0.7, 0.5, -0.2],
            ],
            noise_std: 0.05,
            latent_periods: (60.0, 3000.0),
            latent_terms: 8,
            sp_drift: 30.0,
            gr_baseline: 0.5,
            start_depth: 1000.0,
            step: 0.5,
            seed: 42,
        }
    }
}

/// Offset and scale taking a standardized channel to physical-looking units.
const PHYSICAL: [(f64, f64, &str); 5] = [
    (75.0, 20.0, "API"),
    (2.45, 0.08, "G/C3"),
    (-50.0, 8.0, "MV"),
    (1.5, 0.6, "OHMM"),
    (90.0, 12.0, "US/F"),
];

impl SyntheticConfig {
    pub fn validate(&self) -> Result<()> {
        if self.length < 1000 {
            return Err(Error::InvalidConfig(format!("synthetic length {} < 1000", self.length)));
        }
        if self.mixing.len() != CHANNELS.len() {
            return Err(Error::InvalidConfig(format!("mixing needs {} rows", CHANNELS.len())));
        }
        if !(self.noise_std >= 0.0) {
            return Err(Error::InvalidConfig("noise_std must be >= 0".into()));
        }
        let (lo, hi) = self.latent_periods;
        if !(lo >= 2.0 && hi >= lo) || self.latent_terms == 0 {
            return Err(Error::InvalidConfig("invalid latent spectrum".into()));
        }
        if !(self.step > 0.0) {
            return Err(Error::InvalidConfig("step must be > 0".into()));
        }
        Ok(())
    }
}

/// Unit-variance sum of `terms` sinusoids with log-uniform periods.
fn sinusoid_sum(rng: &mut ChaCha8Rng, len: usize, terms: usize, periods: (f64, f64)) -> Vec<f64> {
    let (lo, hi) = (periods.0.ln(), periods.1.ln());
    let comps: Vec<(f64, f64, f64)> = (0..terms)
        .map(|_| {
            let period = rng.random_range(lo..=hi).exp();
            let phase = rng.random_range(0.0..2.0 * PI);
            let amp = rng.random_range(0.5..1.0);
            (2.0 * PI / period, phase, amp)
        })
        .collect();
    let power: f64 = comps.iter().map(|c| c.2 * c.2 / 2.0).sum();
    let norm = power.sqrt();
    (0..len)
        .map(|i| {
            let t = i as f64;
            comps.iter().map(|&(w, ph, a)| a * (w * t + ph).sin()).sum::<f64>() / norm
        })
        .collect()
}

/// The latent signals behind [`synthesize_well`] for the same config.
pub fn synthesize_latents(config: &SyntheticConfig) -> Result<Vec<Vec<f64>>> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    Ok((0..LATENTS)
        .map(|_| sinusoid_sum(&mut rng, config.length, config.latent_terms, config.latent_periods))
        .collect())
}

pub fn synthesize_well(config: &SyntheticConfig) -> Result<WellLog> {
    let latents = synthesize_latents(config)?;
    let n = config.length;
    // Separate stream so that latents do not depend on noise settings.
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5EED_F00D);
    let baseline_periods = (n as f64 / 10.0, n as f64 / 2.5);
    let baseline = sinusoid_sum(&mut rng, n, 3, baseline_periods);
    let noise = Normal::new(0.0, config.noise_std.max(f64::MIN_POSITIVE)).expect("valid std");

    let mut curves = Vec::with_capacity(CHANNELS.len());
    for (ch, name) in CHANNELS.iter().enumerate() {
        let (offset, scale, unit) = PHYSICAL[ch];
        let weights = config.mixing[ch];
        let values: Vec<f64> = (0..n)
            .map(|i| {
                let mut s: f64 = (0..LATENTS).map(|l| weights[l] * latents[l][i]).sum();
                if config.noise_std > 0.0 {
                    s += noise.sample(&mut rng);
                }
                match *name {
                    "GR" => offset + scale * (s + config.gr_baseline * baseline[i]),
                    "SP" => offset + scale * s - config.sp_drift * i as f64 / n as f64,
                    "ILD" => (offset + scale * s).exp(),
                    _ => offset + scale * s,
                }
            })
            .collect();
        curves.push(Curve::from_values(*name, unit, &values));
    }
    let depths = (0..n).map(|i| config.start_depth + config.step * i as f64).collect();
    WellLog::new(format!("SYNTH-{}", config.seed), depths, curves)
}
