use std::fmt;

use super::{Processing, SweepResult};
use crate::power_control::Scheme;

/// Slack allowed on the scheme and processing orderings.
pub const ORDERING_SLACK: f64 = 1e-9;
/// Oracle agreement: `|analytic − oracle| ≤ max(k·stderr, rel·|analytic|)`.
pub const ORACLE_STDERRS: f64 = 3.0;
pub const ORACLE_RELATIVE: f64 = 0.02;

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub value: f64,
    pub description: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: {}", self.value, self.description)
    }
}

fn rate_at(
    result: &SweepResult,
    value: f64,
    scheme: Scheme,
    processing: Processing,
) -> Option<f64> {
    result
        .rows
        .iter()
        .find(|r| r.value == value && r.scheme == scheme && r.processing == processing)
        .and_then(|r| r.rate)
}

/// MCP ≥ SCP per scheme, and CPC ≥ APC ≥ NPC under MCP, at every grid value.
pub fn check_orderings(result: &SweepResult) -> Vec<Violation> {
    let mut values: Vec<f64> = result.rows.iter().map(|r| r.value).collect();
    values.dedup();
    let mut out = Vec::new();
    for &v in &values {
        for scheme in Scheme::ALL {
            if let (Some(m), Some(s)) = (
                rate_at(result, v, scheme, Processing::Mcp),
                rate_at(result, v, scheme, Processing::Scp),
            ) {
                if m < s - ORDERING_SLACK {
                    out.push(Violation {
                        value: v,
                        description: format!("MCP-{scheme} {m} below SCP-{scheme} {s}"),
                    });
                }
            }
        }
        for pair in [(Scheme::Cpc, Scheme::Apc), (Scheme::Apc, Scheme::Npc)] {
            if let (Some(hi), Some(lo)) = (
                rate_at(result, v, pair.0, Processing::Mcp),
                rate_at(result, v, pair.1, Processing::Mcp),
            ) {
                if hi < lo - ORDERING_SLACK {
                    out.push(Violation {
                        value: v,
                        description: format!("MCP-{} {hi} below MCP-{} {lo}", pair.0, pair.1),
                    });
                }
            }
        }
    }
    out
}

/// Analytic rates against oracle estimates, for rows that carry both.
pub fn check_oracle_agreement(result: &SweepResult) -> Vec<Violation> {
    result
        .rows
        .iter()
        .filter_map(|r| {
            let (rate, (mean, stderr)) = (r.rate?, r.oracle?);
            let allowed = (ORACLE_STDERRS * stderr).max(ORACLE_RELATIVE * rate.abs());
            ((rate - mean).abs() > allowed).then(|| Violation {
                value: r.value,
                description: format!(
                    "{}-{} analytic {rate} vs oracle {mean} ± {stderr} (allowed {allowed})",
                    r.processing, r.scheme
                ),
            })
        })
        .collect()
}
