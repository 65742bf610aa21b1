//! Parameter sweeps, figure presets and CSV output.

mod checks;
mod config;
mod csv_io;
mod presets;
mod sweep;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use checks::{check_oracle_agreement, check_orderings, Violation, ORDERING_SLACK};
pub use config::{parse_config, parse_validate as parse_config_validate, SweepSpec};
pub use csv_io::{
    emit_csv, emit_gnuplot, format_number, read_csv, write_csv, CsvRecord, CSV_HEADER,
};
pub use presets::{preset, Figure};
pub use sweep::{run_sweep, SweepResult, SweepRow};

/// dB → linear power ratio, `10^(x/10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Per-cell rate divided by the mean number of active users `(1 − q) K`.
pub fn per_active_user(rate: f64, users: u32, q: f64) -> Result<f64> {
    if q >= 1.0 {
        return Err(Error::DivisionByZero);
    }
    Ok(rate / ((1.0 - q) * users as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Processing {
    Mcp,
    Scp,
}

impl Processing {
    pub const ALL: [Processing; 2] = [Processing::Mcp, Processing::Scp];

    pub fn as_str(self) -> &'static str {
        match self {
            Processing::Mcp => "MCP",
            Processing::Scp => "SCP",
        }
    }
}

impl fmt::Display for Processing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Processing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mcp" => Ok(Processing::Mcp),
            "scp" => Ok(Processing::Scp),
            other => Err(Error::InvalidArgument(format!(
                "unknown processing '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweptParameter {
    PowerDb,
    Q,
    Users,
    Alpha1,
}

impl SweptParameter {
    pub fn as_str(self) -> &'static str {
        match self {
            SweptParameter::PowerDb => "power_db",
            SweptParameter::Q => "q",
            SweptParameter::Users => "K",
            SweptParameter::Alpha1 => "alpha1",
        }
    }
}

impl fmt::Display for SweptParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweptParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "power_db" | "P" | "power" => Ok(SweptParameter::PowerDb),
            "q" => Ok(SweptParameter::Q),
            "K" | "k" | "users" => Ok(SweptParameter::Users),
            "alpha1" | "alpha" => Ok(SweptParameter::Alpha1),
            other => Err(Error::InvalidArgument(format!(
                "unknown sweep parameter '{other}'"
            ))),
        }
    }
}
