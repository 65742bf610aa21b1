use std::collections::HashSet;

use num_complex::Complex64;

use super::{db_to_linear, Processing, SweptParameter};
use crate::channel::ChannelProfile;
use crate::error::{Error, Result};
use crate::mc_oracle::SimConfig;
use crate::power_control::{ActivityModel, Scheme};

/// One parameter sweep: the grid of the swept quantity plus everything held fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub swept: SweptParameter,
    pub grid: Vec<f64>,
    pub profile: ChannelProfile,
    pub users: u32,
    pub q: f64,
    pub power_db: f64,
    pub schemes: Vec<Scheme>,
    pub processing: Vec<Processing>,
    pub validate: Option<SimConfig>,
    pub per_active_user: bool,
}

impl SweepSpec {
    /// Defaults: SHO taps (1, 0.5), K = 5, q = 0.3, P = 5 dB, all schemes, both processings.
    pub fn new(swept: SweptParameter, grid: Vec<f64>) -> Self {
        Self {
            swept,
            grid,
            profile: ChannelProfile::sho_real(1.0, 0.5).expect("valid taps"),
            users: 5,
            q: 0.3,
            power_db: 5.0,
            schemes: Scheme::ALL.to_vec(),
            processing: Processing::ALL.to_vec(),
            validate: None,
            per_active_user: false,
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::InvalidArgument("sweep grid is empty".into()));
        }
        if self
            .grid
            .windows(2)
            .any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
        {
            return Err(Error::InvalidArgument(
                "sweep grid must be strictly increasing".into(),
            ));
        }
        if self.schemes.is_empty() || self.processing.is_empty() {
            return Err(Error::InvalidArgument(
                "need at least one scheme and one processing".into(),
            ));
        }
        if self.schemes.contains(&Scheme::Custom) {
            return Err(Error::InvalidArgument(
                "sweeps run the NPC, APC and CPC schemes only".into(),
            ));
        }
        if self.swept == SweptParameter::Alpha1 && self.profile.l2() == 0 {
            return Err(Error::InvalidArgument(
                "alpha1 sweeps need a tap at offset +1".into(),
            ));
        }
        ActivityModel::new(self.users, self.q, db_to_linear(self.power_db))?;
        for &v in &self.grid {
            self.point(v)?;
        }
        Ok(())
    }

    /// Channel and activity model at one grid value.
    pub fn point(&self, value: f64) -> Result<(ChannelProfile, ActivityModel)> {
        let (mut users, mut q, mut power_db) = (self.users, self.q, self.power_db);
        let mut profile = self.profile.clone();
        match self.swept {
            SweptParameter::PowerDb => power_db = value,
            SweptParameter::Q => q = value,
            SweptParameter::Users => {
                if value < 1.0 || value.fract() != 0.0 || value > u32::MAX as f64 {
                    return Err(Error::InvalidArgument(format!(
                        "K = {value} is not a positive integer"
                    )));
                }
                users = value as u32;
            }
            SweptParameter::Alpha1 => {
                let mut taps = profile.taps().to_vec();
                taps[profile.l1() + 1] = Complex64::new(value, 0.0);
                profile = ChannelProfile::new(profile.l1(), profile.l2(), taps)?;
            }
        }
        if !power_db.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "power_db = {power_db} is not finite"
            )));
        }
        Ok((
            profile,
            ActivityModel::new(users, q, db_to_linear(power_db))?,
        ))
    }
}

fn list<T, F: Fn(&str) -> Result<T>>(value: &str, parse: F) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse)
        .collect()
}

fn number(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::InvalidArgument(format!("'{s}' is not a number")))
}

/// Parses `M,trials,seed`.
pub fn parse_validate(value: &str) -> Result<SimConfig> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    let [m, trials, seed] = parts.as_slice() else {
        return Err(Error::InvalidArgument(format!(
            "validate expects M,trials,seed, got '{value}'"
        )));
    };
    let int = |s: &str| {
        s.parse::<u64>()
            .map_err(|_| Error::InvalidArgument(format!("'{s}' is not a nonnegative integer")))
    };
    SimConfig::new(int(m)? as usize, int(trials)? as usize, int(seed)?)
}

/// Parses the flat `key = value` sweep configuration.
///
/// Blank lines and `#` comments are ignored. Keys: `sweep` (required),
/// `grid` (required, comma list), `alpha0`, `alpha1`, `taps` + `l1`, `K`, `q`,
/// `power_db`, `schemes`, `processing`, `validate` (`M,trials,seed`),
/// `per_active_user` (`true`/`false`).
pub fn parse_config(text: &str) -> Result<SweepSpec> {
    let mut seen = HashSet::new();
    let mut swept = None;
    let mut grid = None;
    let mut spec = SweepSpec::new(SweptParameter::PowerDb, Vec::new());
    let (mut alpha0, mut alpha1) = (1.0, 0.5);
    let mut taps: Option<Vec<f64>> = None;
    let mut l1 = 0usize;

    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let at = |e: Error| match e {
            Error::Config { .. } => e,
            other => Error::Config {
                line: line_no,
                message: other
                    .to_string()
                    .trim_start_matches("invalid argument: ")
                    .to_string(),
            },
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config {
                line: line_no,
                message: format!("expected 'key = value', got '{line}'"),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        if !seen.insert(key.to_string()) {
            return Err(Error::Config {
                line: line_no,
                message: format!("duplicate key '{key}'"),
            });
        }
        match key {
            "sweep" => swept = Some(value.parse::<SweptParameter>().map_err(at)?),
            "grid" => grid = Some(list(value, number).map_err(at)?),
            "alpha0" => alpha0 = number(value).map_err(at)?,
            "alpha1" => alpha1 = number(value).map_err(at)?,
            "taps" => taps = Some(list(value, number).map_err(at)?),
            "l1" => {
                l1 = value.parse().map_err(|_| {
                    at(Error::InvalidArgument(format!(
                        "'{value}' is not a nonnegative integer"
                    )))
                })?
            }
            "K" | "users" => {
                spec.users = value.parse().map_err(|_| {
                    at(Error::InvalidArgument(format!(
                        "'{value}' is not a positive integer"
                    )))
                })?
            }
            "q" => spec.q = number(value).map_err(at)?,
            "power_db" => spec.power_db = number(value).map_err(at)?,
            "schemes" => spec.schemes = list(value, |s| s.parse::<Scheme>()).map_err(at)?,
            "processing" => {
                spec.processing = if value.eq_ignore_ascii_case("both") {
                    Processing::ALL.to_vec()
                } else {
                    list(value, |s| s.parse::<Processing>()).map_err(at)?
                }
            }
            "validate" => spec.validate = Some(parse_validate(value).map_err(at)?),
            "per_active_user" => {
                spec.per_active_user = match value {
                    "true" | "yes" | "1" => true,
                    "false" | "no" | "0" => false,
                    _ => {
                        return Err(at(Error::InvalidArgument(format!(
                            "'{value}' is not a boolean"
                        ))))
                    }
                }
            }
            other => {
                return Err(Error::Config {
                    line: line_no,
                    message: format!("unknown key '{other}'"),
                })
            }
        }
    }

    let missing = |key: &str| Error::Config {
        line: 0,
        message: format!("missing required key '{key}'"),
    };
    spec.swept = swept.ok_or_else(|| missing("sweep"))?;
    spec.grid = grid.ok_or_else(|| missing("grid"))?;
    spec.profile = match taps {
        Some(t) => {
            if t.len() <= l1 {
                return Err(Error::Config {
                    line: 0,
                    message: format!("l1 = {l1} leaves no local tap among {} taps", t.len()),
                });
            }
            ChannelProfile::from_real_taps(l1, t.len() - 1 - l1, &t)?
        }
        None => ChannelProfile::sho_real(alpha0, alpha1)?,
    };
    spec.check()?;
    Ok(spec)
}
