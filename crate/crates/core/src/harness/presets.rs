use std::fmt;
use std::str::FromStr;

use super::{SweepSpec, SweptParameter};
use crate::error::{Error, Result};

/// The four published parameter sweeps, all on the soft-handoff model with
/// `α0 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Rate vs total cell power, 0..20 dB; `α1 = 0.5`, `K = 5`, `q = 0.3`.
    Fig3,
    /// Per-active-user rate vs `q` in 0..0.95; `α1 = 0.5`, `K = 5`, `P = 5 dB`.
    Fig4,
    /// Rate vs `K` in 1..30; `α1 = 0.5`, `q = 0.3`, `P = 5 dB`.
    Fig5,
    /// Rate vs `α1` in 0..1; `K = 5`, `q = 0.3`, `P = 5 dB`.
    Fig6,
}

impl Figure {
    pub const ALL: [Figure; 4] = [Figure::Fig3, Figure::Fig4, Figure::Fig5, Figure::Fig6];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown figure '{s}'")))
    }
}

/// `count` evenly spaced values from `start` to `stop` inclusive.
fn uniform(start: f64, stop: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
        .collect()
}

pub fn preset(figure: Figure) -> SweepSpec {
    match figure {
        Figure::Fig3 => SweepSpec::new(SweptParameter::PowerDb, uniform(0.0, 20.0, 21)),
        Figure::Fig4 => {
            let mut spec = SweepSpec::new(SweptParameter::Q, uniform(0.0, 0.95, 20));
            spec.per_active_user = true;
            spec
        }
        Figure::Fig5 => SweepSpec::new(SweptParameter::Users, uniform(1.0, 30.0, 30)),
        Figure::Fig6 => SweepSpec::new(SweptParameter::Alpha1, uniform(0.0, 1.0, 21)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid() {
        for f in Figure::ALL {
            preset(f).check().unwrap();
            assert_eq!(f.name().parse::<Figure>().unwrap(), f);
        }
        assert_eq!(preset(Figure::Fig3).grid.len(), 21);
        assert_eq!(preset(Figure::Fig5).grid[29], 30.0);
        assert_eq!(preset(Figure::Fig4).grid[3], 0.15);
    }
}
