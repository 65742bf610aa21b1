//! Per-cell throughput with single-cell processing.
//!
//! Each base station decodes its own cell and treats the other cells as
//! Gaussian noise, knowing who is active. The per-cell rate is
//! `E[log₂(1 + SINR)]` with
//! `SINR = |α0|² g0 / (1 + Σ_{l≠0} |α_l|² g_l)` and i.i.d. `g_l`.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::ChannelProfile;
use crate::error::{Error, Result};
use crate::power_control::VirtualGainDistribution;

/// Largest product support enumerated exactly.
pub const ENUMERATION_CAP: u128 = 10_000_000;
/// Samples used when the exact sum is too large.
pub const FALLBACK_SAMPLES: u64 = 1_000_000;
pub const FALLBACK_SEED: u64 = 0x5c9;

/// One independent copy of `dist` per tap position of `profile`.
#[derive(Debug, Clone)]
pub struct SinrLaw<'a> {
    profile: &'a ChannelProfile,
    dist: &'a VirtualGainDistribution,
    signal: f64,
    interference: Vec<f64>,
}

impl<'a> SinrLaw<'a> {
    pub fn new(profile: &'a ChannelProfile, dist: &'a VirtualGainDistribution) -> Self {
        let center = profile.l1();
        let weights: Vec<f64> = profile.taps().iter().map(|t| t.norm_sqr()).collect();
        let interference = weights
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != center)
            .map(|(_, &w)| w)
            .collect();
        Self {
            profile,
            dist,
            signal: weights[center],
            interference,
        }
    }

    pub fn profile(&self) -> &ChannelProfile {
        self.profile
    }

    pub fn distribution(&self) -> &VirtualGainDistribution {
        self.dist
    }

    /// SINR for a local gain and the interferers' gains in tap order (centre skipped).
    pub fn sinr(&self, local: f64, interferers: &[f64]) -> f64 {
        let noise: f64 = 1.0
            + self
                .interference
                .iter()
                .zip(interferers)
                .map(|(w, g)| w * g)
                .sum::<f64>();
        self.signal * local / noise
    }

    pub fn interferer_count(&self) -> usize {
        self.interference.len()
    }
}

/// Number of terms in the exact product-law sum.
pub fn support_size(profile: &ChannelProfile, dist: &VirtualGainDistribution) -> u128 {
    (dist.atoms().len() as u128).saturating_pow(profile.width() as u32)
}

/// Exact `E[log₂(1 + SINR)]` by enumeration of the product law.
pub fn scp_rate_exact(profile: &ChannelProfile, dist: &VirtualGainDistribution) -> Result<f64> {
    let terms = support_size(profile, dist);
    if terms > ENUMERATION_CAP {
        return Err(Error::SupportTooLarge {
            terms,
            cap: ENUMERATION_CAP,
        });
    }
    let law = SinrLaw::new(profile, dist);
    let atoms = dist.atoms();
    let n = law.interferer_count();

    // Local atom in parallel; partial sums are reduced in index order.
    let partials: Vec<f64> = atoms
        .par_iter()
        .map(|local| {
            if local.gain_sq == 0.0 {
                return 0.0;
            }
            let mut idx = vec![0usize; n];
            let mut gains = vec![0.0; n];
            let mut sum = 0.0;
            loop {
                let mut prob = local.prob;
                for (slot, &i) in idx.iter().enumerate() {
                    gains[slot] = atoms[i].gain_sq;
                    prob *= atoms[i].prob;
                }
                sum += prob * law.sinr(local.gain_sq, &gains).ln_1p();
                // odometer
                let mut pos = 0;
                loop {
                    if pos == n {
                        return sum / std::f64::consts::LN_2;
                    }
                    idx[pos] += 1;
                    if idx[pos] < atoms.len() {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
            }
        })
        .collect();
    Ok(partials.iter().sum())
}

/// Monte Carlo estimate of the SCP rate: `(mean, standard error)`.
pub fn scp_rate_mc(
    profile: &ChannelProfile,
    dist: &VirtualGainDistribution,
    samples: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    if dist.is_silent() {
        return Ok((0.0, 0.0));
    }
    let law = SinrLaw::new(profile, dist);
    let atoms = dist.atoms();
    let picker = WeightedIndex::new(atoms.iter().map(|a| a.prob))
        .map_err(|e| Error::InvalidDistribution(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gains = vec![0.0; law.interferer_count()];

    // Welford accumulation
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for i in 0..samples {
        let local = atoms[picker.sample(&mut rng)].gain_sq;
        for g in gains.iter_mut() {
            *g = atoms[picker.sample(&mut rng)].gain_sq;
        }
        let x = law.sinr(local, &gains).log2_1p_bits();
        let delta = x - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (x - mean);
    }
    let stderr = if samples > 1 {
        (m2 / (samples - 1) as f64 / samples as f64).sqrt()
    } else {
        0.0
    };
    Ok((mean, stderr))
}

trait Bits {
    fn log2_1p_bits(self) -> f64;
}

impl Bits for f64 {
    fn log2_1p_bits(self) -> f64 {
        self.ln_1p() / std::f64::consts::LN_2
    }
}

/// Exact rate when enumerable, otherwise the Monte Carlo mean.
pub fn scp_rate(profile: &ChannelProfile, dist: &VirtualGainDistribution) -> Result<f64> {
    match scp_rate_exact(profile, dist) {
        Err(Error::SupportTooLarge { .. }) => {
            scp_rate_mc(profile, dist, FALLBACK_SAMPLES, FALLBACK_SEED).map(|(m, _)| m)
        }
        other => other,
    }
}
