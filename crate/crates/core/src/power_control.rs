//! Virtual-user gain laws induced by power-control schemes.
//!
//! With `K` users per cell, each silent with probability `q`, a cell behaves
//! like one virtual user whose squared amplitude is `Σ_k e_k p_k`. The law of
//! that quantity depends on how active users share the cell power `P`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Atoms with less mass than this are dropped.
pub const PRUNE_MASS: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// No power control: every active user sends `P/K`.
    Npc,
    /// Adaptive: the `L` active users split `P` evenly.
    Apc,
    /// Cognitive: silent users coherently relay the active users' messages.
    Cpc,
    Custom,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Npc, Scheme::Apc, Scheme::Cpc];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Npc => "NPC",
            Scheme::Apc => "APC",
            Scheme::Cpc => "CPC",
            Scheme::Custom => "CUSTOM",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "npc" => Ok(Scheme::Npc),
            "apc" => Ok(Scheme::Apc),
            "cpc" => Ok(Scheme::Cpc),
            "custom" => Ok(Scheme::Custom),
            other => Err(Error::InvalidArgument(format!("unknown scheme '{other}'"))),
        }
    }
}

/// Users per cell, non-activity probability and total cell power (linear).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActivityModel {
    users: u32,
    q: f64,
    power: f64,
}

impl ActivityModel {
    pub fn new(users: u32, q: f64, power: f64) -> Result<Self> {
        if users == 0 {
            return Err(Error::InvalidModel(
                "need at least one user per cell".into(),
            ));
        }
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidModel(format!("q = {q} is not a probability")));
        }
        if !(power >= 0.0 && power.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "power = {power} must be finite and >= 0"
            )));
        }
        Ok(Self { users, q, power })
    }

    pub fn users(&self) -> u32 {
        self.users
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    /// Probability that every user in a cell is silent, `q^K`.
    pub fn cell_silence(&self) -> f64 {
        self.q.powi(self.users as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainAtom {
    pub gain_sq: f64,
    pub prob: f64,
}

/// Finite law of the squared virtual gain. Atoms are sorted by `gain_sq`,
/// distinct, and their masses sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct VirtualGainDistribution {
    atoms: Vec<GainAtom>,
    scheme: Scheme,
}

impl VirtualGainDistribution {
    /// Arbitrary user-supplied law. Masses must sum to one within `1e-9`.
    pub fn custom(atoms: &[(f64, f64)]) -> Result<Self> {
        Self::from_pairs(atoms, Scheme::Custom)
    }

    /// All mass at `gain_sq`.
    pub fn deterministic(gain_sq: f64) -> Result<Self> {
        Self::from_pairs(&[(gain_sq, 1.0)], Scheme::Custom)
    }

    /// On/off law: `0` with probability `q_tilde`, `gain_sq` otherwise.
    pub fn bernoulli(q_tilde: f64, gain_sq: f64) -> Result<Self> {
        Self::from_pairs(&[(0.0, q_tilde), (gain_sq, 1.0 - q_tilde)], Scheme::Custom)
    }

    pub fn from_pairs(pairs: &[(f64, f64)], scheme: Scheme) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidDistribution("no atoms".into()));
        }
        for &(g, p) in pairs {
            if !(g >= 0.0 && g.is_finite()) {
                return Err(Error::InvalidDistribution(format!(
                    "gain {g} must be finite and >= 0"
                )));
            }
            if !(p >= 0.0 && p.is_finite()) {
                return Err(Error::InvalidDistribution(format!(
                    "mass {p} must be finite and >= 0"
                )));
            }
        }
        let total: f64 = pairs.iter().map(|&(_, p)| p).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!(
                "masses sum to {total}, not 1"
            )));
        }
        let mut sorted: Vec<(f64, f64)> = pairs
            .iter()
            .copied()
            .filter(|&(_, p)| p >= PRUNE_MASS)
            .collect();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut atoms: Vec<GainAtom> = Vec::with_capacity(sorted.len());
        for (g, p) in sorted {
            match atoms.last_mut() {
                Some(last) if last.gain_sq == g => last.prob += p,
                _ => atoms.push(GainAtom {
                    gain_sq: g,
                    prob: p,
                }),
            }
        }
        let kept: f64 = atoms.iter().map(|a| a.prob).sum();
        if kept <= 0.0 {
            return Err(Error::InvalidDistribution("all masses pruned".into()));
        }
        for a in &mut atoms {
            a.prob /= kept;
        }
        Ok(Self { atoms, scheme })
    }

    pub fn atoms(&self) -> &[GainAtom] {
        &self.atoms
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn expect<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.atoms.iter().map(|a| a.prob * f(a.gain_sq)).sum()
    }

    pub fn mean(&self) -> f64 {
        self.expect(|g| g)
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.expect(|g| (g - m) * (g - m))
    }

    /// Mass at zero gain.
    pub fn prob_zero(&self) -> f64 {
        self.atoms
            .iter()
            .filter(|a| a.gain_sq == 0.0)
            .map(|a| a.prob)
            .sum()
    }

    pub fn is_deterministic(&self) -> bool {
        self.atoms.len() == 1
    }

    /// True when every realization is zero.
    pub fn is_silent(&self) -> bool {
        self.atoms.iter().all(|a| a.gain_sq == 0.0)
    }

    /// Cumulative masses aligned with `atoms()`, for sampling.
    pub fn cumulative(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.atoms
            .iter()
            .map(|a| {
                acc += a.prob;
                acc
            })
            .collect()
    }
}

/// `Σ prob · gain_sq`.
pub fn mean_gain(dist: &VirtualGainDistribution) -> f64 {
    dist.mean()
}

/// `ln C(n, k) + k ln p + (n-k) ln(1-p)` exponentiated, with `0 · ln 0 = 0`.
fn binomial_pmf(n: u32, p_active: f64) -> Vec<f64> {
    let mut ln_fact = Vec::with_capacity(n as usize + 1);
    ln_fact.push(0.0f64);
    for i in 1..=n {
        ln_fact.push(ln_fact[i as usize - 1] + (i as f64).ln());
    }
    let ln_p = p_active.ln();
    let ln_q = (1.0 - p_active).ln();
    (0..=n)
        .map(|l| {
            let on = if l == 0 { 0.0 } else { l as f64 * ln_p };
            let off = if l == n { 0.0 } else { (n - l) as f64 * ln_q };
            (ln_fact[n as usize] - ln_fact[l as usize] - ln_fact[(n - l) as usize] + on + off).exp()
        })
        .collect()
}

/// Active users get `P/K` each: gain `L·P/K` with `L ~ Binomial(K, 1-q)`.
pub fn npc_distribution(model: &ActivityModel) -> VirtualGainDistribution {
    let k = model.users();
    let pmf = binomial_pmf(k, 1.0 - model.q());
    let pairs: Vec<(f64, f64)> = pmf
        .iter()
        .enumerate()
        .map(|(l, &p)| (l as f64 * model.power() / k as f64, p))
        .collect();
    VirtualGainDistribution::from_pairs(&pairs, Scheme::Npc).expect("binomial law is valid")
}

/// The cell sends total power `P` whenever at least one user is active.
pub fn apc_distribution(model: &ActivityModel) -> VirtualGainDistribution {
    let silent = model.cell_silence();
    VirtualGainDistribution::from_pairs(
        &[(0.0, silent), (model.power(), 1.0 - silent)],
        Scheme::Apc,
    )
    .expect("bernoulli law is valid")
}

/// Optimal cognitive virtual power with `active` users out of `users`:
/// `(K - L + 1) P` for `L ≥ 1`, zero for a silent cell.
pub fn cpc_virtual_power(users: u32, active: u32, power: f64) -> f64 {
    if active == 0 {
        0.0
    } else {
        (users - active + 1) as f64 * power
    }
}

pub fn cpc_distribution(model: &ActivityModel) -> VirtualGainDistribution {
    let k = model.users();
    let pmf = binomial_pmf(k, 1.0 - model.q());
    let pairs: Vec<(f64, f64)> = pmf
        .iter()
        .enumerate()
        .map(|(l, &p)| (cpc_virtual_power(k, l as u32, model.power()), p))
        .collect();
    VirtualGainDistribution::from_pairs(&pairs, Scheme::Cpc).expect("binomial law is valid")
}

pub fn distribution_for(scheme: Scheme, model: &ActivityModel) -> Result<VirtualGainDistribution> {
    match scheme {
        Scheme::Npc => Ok(npc_distribution(model)),
        Scheme::Apc => Ok(apc_distribution(model)),
        Scheme::Cpc => Ok(cpc_distribution(model)),
        Scheme::Custom => Err(Error::InvalidArgument(
            "custom laws are built with VirtualGainDistribution::custom".into(),
        )),
    }
}

/// Closed-form mean virtual power: the static-system power each scheme
/// converges to (NPC, APC) or is bounded by (CPC).
///
/// NPC: `P(1-q)`; APC: `P(1-q^K)`; CPC: `P(1 + Kq - (K+1)q^K)`.
pub fn mean_power_closed_form(scheme: Scheme, model: &ActivityModel) -> Option<f64> {
    let (k, q, p) = (model.users() as f64, model.q(), model.power());
    let qk = model.cell_silence();
    match scheme {
        Scheme::Npc => Some(p * (1.0 - q)),
        Scheme::Apc => Some(p * (1.0 - qk)),
        Scheme::Cpc => Some(p * (1.0 + k * q - (k + 1.0) * qk)),
        Scheme::Custom => None,
    }
}
