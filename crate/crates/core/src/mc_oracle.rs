//! Finite-size Monte Carlo estimate of the MCP per-cell throughput.
//!
//! One trial draws i.i.d. virtual gains `d_m`, forms
//! `G = I + H̃ diag(d) H̃†` with `[H̃]_{i,j} = α_{j−i}` truncated to `M` cells
//! (out-of-range indices dropped), and returns `(1/M) log₂ det G`. `G` is
//! Hermitian positive definite with half-bandwidth `l1 + l2`, so the
//! determinant comes from a band Cholesky factor in `O(M (l1+l2)²)`.

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::ChannelProfile;
use crate::error::{Error, Result};
use crate::power_control::VirtualGainDistribution;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub cells: usize,
    pub trials: usize,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(cells: usize, trials: usize, seed: u64) -> Result<Self> {
        if cells == 0 || trials == 0 {
            return Err(Error::InvalidArgument(
                "cells and trials must be positive".into(),
            ));
        }
        Ok(Self {
            cells,
            trials,
            seed,
        })
    }

    fn check(&self, profile: &ChannelProfile) -> Result<()> {
        if self.cells == 0 || self.trials == 0 {
            return Err(Error::InvalidArgument(
                "cells and trials must be positive".into(),
            ));
        }
        if self.cells < profile.width() {
            return Err(Error::InvalidArgument(format!(
                "{} cells cannot hold a band of width {}",
                self.cells,
                profile.width()
            )));
        }
        Ok(())
    }
}

/// Lower band of `G`: `band[i * (w+1) + s] = G[i][i−s]`, `s = 0..=w`.
fn covariance_band(profile: &ChannelProfile, gains: &[f64]) -> (Vec<Complex64>, usize) {
    let m = gains.len();
    let (l1, l2) = (profile.l1() as isize, profile.l2() as isize);
    let w = (l1 + l2) as usize;
    let stride = w + 1;
    let mut band = vec![Complex64::new(0.0, 0.0); m * stride];
    for i in 0..m {
        band[i * stride] = Complex64::new(1.0, 0.0);
    }
    for (j, &d) in gains.iter().enumerate() {
        if d == 0.0 {
            continue;
        }
        let j = j as isize;
        // rows reached by column j of H̃: j − i ∈ [−l1, l2]
        let lo = (j - l2).max(0);
        let hi = (j + l1).min(m as isize - 1);
        for i in lo..=hi {
            let a_i = profile.tap(j - i);
            for k in lo..=i {
                let a_k = profile.tap(j - k);
                band[i as usize * stride + (i - k) as usize] += a_i * a_k.conj() * d;
            }
        }
    }
    (band, w)
}

/// `ln det` of a Hermitian positive-definite band matrix via Cholesky.
fn band_cholesky_ln_det(mut band: Vec<Complex64>, n: usize, w: usize) -> Result<f64> {
    let stride = w + 1;
    let mut ln_det = 0.0;
    for i in 0..n {
        let first = i.saturating_sub(w);
        for k in first..i {
            let mut acc = band[i * stride + (i - k)];
            for m in first.max(k.saturating_sub(w))..k {
                acc -= band[i * stride + (i - m)] * band[k * stride + (k - m)].conj();
            }
            band[i * stride + (i - k)] = acc / band[k * stride].re;
        }
        let mut diag = band[i * stride].re;
        for m in first..i {
            diag -= band[i * stride + (i - m)].norm_sqr();
        }
        if !diag.is_finite() || diag <= 0.0 {
            return Err(Error::NumericalFailure { row: i });
        }
        let l = diag.sqrt();
        band[i * stride] = Complex64::new(l, 0.0);
        ln_det += 2.0 * l.ln();
    }
    Ok(ln_det)
}

/// `log₂ det(I + H̃ diag(gains) H̃†)` for `M = gains.len()` cells.
pub fn reduced_log_det(profile: &ChannelProfile, gains: &[f64]) -> Result<f64> {
    if gains.is_empty() {
        return Ok(0.0);
    }
    let (band, w) = covariance_band(profile, gains);
    Ok(band_cholesky_ln_det(band, gains.len(), w)? / std::f64::consts::LN_2)
}

/// Per-trial generator: stream `trial_index` of the ChaCha8 key derived from `seed`.
pub fn trial_rng(seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial_index);
    rng
}

/// Draws `cells` i.i.d. gains from `dist`.
pub fn sample_gains(
    dist: &VirtualGainDistribution,
    cells: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    let atoms = dist.atoms();
    if atoms.len() == 1 {
        return Ok(vec![atoms[0].gain_sq; cells]);
    }
    let picker = WeightedIndex::new(atoms.iter().map(|a| a.prob))
        .map_err(|e| Error::InvalidDistribution(e.to_string()))?;
    Ok((0..cells)
        .map(|_| atoms[picker.sample(rng)].gain_sq)
        .collect())
}

/// One realization of `(1/M) log₂ det(I + H̃ D H̃†)`.
pub fn sample_throughput(
    profile: &ChannelProfile,
    dist: &VirtualGainDistribution,
    cfg: &SimConfig,
    trial_index: u64,
) -> Result<f64> {
    cfg.check(profile)?;
    let mut rng = trial_rng(cfg.seed, trial_index);
    let gains = sample_gains(dist, cfg.cells, &mut rng)?;
    Ok(reduced_log_det(profile, &gains)? / cfg.cells as f64)
}

/// Mean and standard error over `cfg.trials` independent trials.
pub fn estimate_throughput(
    profile: &ChannelProfile,
    dist: &VirtualGainDistribution,
    cfg: &SimConfig,
) -> Result<(f64, f64)> {
    cfg.check(profile)?;
    let samples: Vec<f64> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| sample_throughput(profile, dist, cfg, t))
        .collect::<Result<_>>()?;
    Ok(mean_and_stderr(&samples))
}

pub(crate) fn mean_and_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    if samples.iter().all(|&x| x == samples[0]) {
        return (samples[0], 0.0);
    }
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
