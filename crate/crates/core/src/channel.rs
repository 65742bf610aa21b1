//! Equivalent ISI filter of a linear cell array and its spectral integrals.
//!
//! Tap `α_l` is the path gain from the cell at offset `l` to a base station,
//! for `l = -l1..=l2`. The filter response is `H(f) = Σ_l α_l e^{-j2πlf}` and
//! the output spectrum (unit flat input) is `S(f) = |H(f)|²`.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::integrate_unit;

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelProfile {
    l1: usize,
    l2: usize,
    taps: Vec<Complex64>,
}

impl ChannelProfile {
    /// `taps[i]` is `α_{i - l1}`.
    pub fn new(l1: usize, l2: usize, taps: Vec<Complex64>) -> Result<Self> {
        if taps.len() != l1 + l2 + 1 {
            return Err(Error::InvalidProfile(format!(
                "expected {} taps for l1={l1}, l2={l2}, got {}",
                l1 + l2 + 1,
                taps.len()
            )));
        }
        if taps.iter().any(|t| !t.re.is_finite() || !t.im.is_finite()) {
            return Err(Error::InvalidProfile("taps must be finite".into()));
        }
        if taps.iter().all(|t| t.norm_sqr() == 0.0) {
            return Err(Error::InvalidProfile("all taps are zero".into()));
        }
        Ok(Self { l1, l2, taps })
    }

    /// Soft-handoff profile: local tap `α0` and one neighbour tap `α1` (l1=0, l2=1).
    pub fn sho(alpha0: Complex64, alpha1: Complex64) -> Result<Self> {
        Self::new(0, 1, vec![alpha0, alpha1])
    }

    /// Real-valued soft-handoff profile.
    pub fn sho_real(alpha0: f64, alpha1: f64) -> Result<Self> {
        Self::sho(Complex64::new(alpha0, 0.0), Complex64::new(alpha1, 0.0))
    }

    pub fn from_real_taps(l1: usize, l2: usize, taps: &[f64]) -> Result<Self> {
        Self::new(
            l1,
            l2,
            taps.iter().map(|&t| Complex64::new(t, 0.0)).collect(),
        )
    }

    pub fn l1(&self) -> usize {
        self.l1
    }

    pub fn l2(&self) -> usize {
        self.l2
    }

    pub fn taps(&self) -> &[Complex64] {
        &self.taps
    }

    pub fn width(&self) -> usize {
        self.taps.len()
    }

    /// Tap at offset `l` in `-l1..=l2`; zero outside the band.
    pub fn tap(&self, l: isize) -> Complex64 {
        let idx = l + self.l1 as isize;
        if idx < 0 || idx as usize >= self.taps.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.taps[idx as usize]
        }
    }

    pub fn offsets(&self) -> impl Iterator<Item = isize> + '_ {
        -(self.l1 as isize)..=(self.l2 as isize)
    }

    /// Local (offset-zero) tap.
    pub fn center(&self) -> Complex64 {
        self.taps[self.l1]
    }

    pub fn is_sho(&self) -> bool {
        (self.l1 == 0 && self.l2 == 1) || (self.l1 == 1 && self.l2 == 0)
    }

    /// `Σ_l |α_l|²`, the mean of `S(f)` over a period.
    pub fn energy(&self) -> f64 {
        self.taps.iter().map(|t| t.norm_sqr()).sum()
    }

    /// Mirror image: offsets negated.
    pub fn reversed(&self) -> Self {
        let mut taps = self.taps.clone();
        taps.reverse();
        Self {
            l1: self.l2,
            l2: self.l1,
            taps,
        }
    }

    pub fn conjugated(&self) -> Self {
        Self {
            l1: self.l1,
            l2: self.l2,
            taps: self.taps.iter().map(|t| t.conj()).collect(),
        }
    }

    /// `(a, b)` coefficients of the closed forms, when `S(f) = c0 + c1 cos(2πf + φ)`.
    fn two_tap_coefficients(&self, x: f64) -> Option<(f64, f64)> {
        let (m0, m1) = match self.taps.as_slice() {
            [t] => (t.norm(), 0.0),
            [t0, t1] => (t0.norm(), t1.norm()),
            _ => return None,
        };
        Some((1.0 + x * (m0 * m0 + m1 * m1), 2.0 * x * m0 * m1))
    }
}

/// `S(f) = |Σ_l α_l e^{-j2πlf}|²`.
pub fn psd(profile: &ChannelProfile, f: f64) -> f64 {
    profile
        .offsets()
        .zip(profile.taps())
        .map(|(l, &t)| t * Complex64::from_polar(1.0, -2.0 * PI * l as f64 * f))
        .sum::<Complex64>()
        .norm_sqr()
}

/// `∫₀¹ log₂(1 + x S(f)) df`, closed form for profiles with at most two taps.
pub fn log_integral(profile: &ChannelProfile, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    match profile.two_tap_coefficients(x) {
        Some((a, b)) => (0.5 * (a + ((a - b) * (a + b)).sqrt())).log2(),
        None => log_integral_quadrature(profile, x),
    }
}

/// `∫₀¹ 1 / (1 + x S(f)) df`, closed form for profiles with at most two taps.
pub fn resolvent_integral(profile: &ChannelProfile, x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    match profile.two_tap_coefficients(x) {
        Some((a, b)) => 1.0 / ((a - b) * (a + b)).sqrt(),
        None => resolvent_integral_quadrature(profile, x),
    }
}

/// Quadrature path of [`log_integral`], valid for any profile.
pub fn log_integral_quadrature(profile: &ChannelProfile, x: f64) -> f64 {
    integrate_unit(|f| (x * psd(profile, f)).ln_1p()) / LN_2
}

/// Quadrature path of [`resolvent_integral`], valid for any profile.
pub fn resolvent_integral_quadrature(profile: &ChannelProfile, x: f64) -> f64 {
    integrate_unit(|f| 1.0 / (1.0 + x * psd(profile, f)))
}
