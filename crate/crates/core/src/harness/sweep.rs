use rayon::prelude::*;

use super::{per_active_user, Processing, SweepSpec, SweptParameter};
use crate::channel::ChannelProfile;
use crate::error::Result;
use crate::mc_oracle::{estimate_throughput, SimConfig};
use crate::mcp_rate::{mcp_rate, sho_apc_rate};
use crate::power_control::{distribution_for, ActivityModel, Scheme, VirtualGainDistribution};
use crate::scp_rate::{scp_rate, scp_rate_mc};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub param: SweptParameter,
    pub value: f64,
    pub scheme: Scheme,
    pub processing: Processing,
    /// Analytic rate in bits per channel use per cell; `None` if evaluation failed.
    pub rate: Option<f64>,
    /// Oracle `(mean, stderr)` when validation is enabled.
    pub oracle: Option<(f64, f64)>,
    pub per_active_user: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn failed(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.error.is_some())
    }

    /// `(value, rate)` points of one curve, in grid order.
    pub fn curve(&self, scheme: Scheme, processing: Processing) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.scheme == scheme && r.processing == processing)
            .filter_map(|r| r.rate.map(|rate| (r.value, rate)))
            .collect()
    }

    /// Same as [`curve`](Self::curve) with the per-active-user column.
    pub fn per_user_curve(&self, scheme: Scheme, processing: Processing) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.scheme == scheme && r.processing == processing)
            .filter_map(|r| r.per_active_user.map(|v| (r.value, v)))
            .collect()
    }
}

/// Analytic MCP rate. The SHO/APC pair uses the explicit erasure solution.
pub fn analytic_mcp(
    profile: &ChannelProfile,
    scheme: Scheme,
    model: &ActivityModel,
    dist: &VirtualGainDistribution,
) -> Result<f64> {
    if scheme == Scheme::Apc && profile.is_sho() && model.q() < 1.0 && model.power() > 0.0 {
        let other = if profile.l1() == 0 {
            profile.taps()[1]
        } else {
            profile.taps()[0]
        };
        return sho_apc_rate(
            profile.center(),
            other,
            model.users(),
            model.q(),
            model.power(),
        );
    }
    mcp_rate(profile, dist)
}

fn oracle(
    profile: &ChannelProfile,
    dist: &VirtualGainDistribution,
    processing: Processing,
    cfg: &SimConfig,
) -> Result<(f64, f64)> {
    match processing {
        Processing::Mcp => estimate_throughput(profile, dist, cfg),
        Processing::Scp => scp_rate_mc(profile, dist, (cfg.cells * cfg.trials) as u64, cfg.seed),
    }
}

fn evaluate(spec: &SweepSpec, value: f64, scheme: Scheme, processing: Processing) -> SweepRow {
    let mut row = SweepRow {
        param: spec.swept,
        value,
        scheme,
        processing,
        rate: None,
        oracle: None,
        per_active_user: None,
        error: None,
    };
    let outcome = (|| -> Result<()> {
        let (profile, model) = spec.point(value)?;
        let dist = distribution_for(scheme, &model)?;
        let rate = match processing {
            Processing::Mcp => analytic_mcp(&profile, scheme, &model, &dist)?,
            Processing::Scp => scp_rate(&profile, &dist)?,
        };
        row.rate = Some(rate);
        if let Some(cfg) = &spec.validate {
            row.oracle = Some(oracle(&profile, &dist, processing, cfg)?);
        }
        if spec.per_active_user {
            row.per_active_user = Some(per_active_user(rate, model.users(), model.q())?);
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        row.error = Some(e.to_string());
    }
    row
}

/// Evaluates every (grid point, scheme, processing) triple. Rows come out in
/// grid order, then scheme order, then processing order; failures are kept
/// as rows with `error` set.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.check()?;
    let rows = spec
        .grid
        .par_iter()
        .map(|&value| {
            let mut rows = Vec::new();
            for &scheme in &spec.schemes {
                for &processing in &spec.processing {
                    rows.push(evaluate(spec, value, scheme, processing));
                }
            }
            rows
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Ok(SweepResult { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::db_to_linear;
    use crate::mcp_rate::mcp_rate_erasure;
    use crate::power_control::apc_distribution;
    use crate::scp_rate::scp_rate_exact;

    #[test]
    fn single_point_matches_direct_calls() {
        let spec = SweepSpec::new(SweptParameter::PowerDb, vec![5.0]);
        let result = run_sweep(&spec).unwrap();
        assert_eq!(result.rows.len(), 6);
        let profile = ChannelProfile::sho_real(1.0, 0.5).unwrap();
        let model = ActivityModel::new(5, 0.3, db_to_linear(5.0)).unwrap();
        for row in &result.rows {
            let dist = distribution_for(row.scheme, &model).unwrap();
            let direct = match (row.scheme, row.processing) {
                (Scheme::Apc, Processing::Mcp) => {
                    mcp_rate_erasure(&profile, 0.3f64.powi(5), model.power()).unwrap()
                }
                (_, Processing::Mcp) => mcp_rate(&profile, &dist).unwrap(),
                (_, Processing::Scp) => scp_rate_exact(&profile, &dist).unwrap(),
            };
            assert!((row.rate.unwrap() - direct).abs() < 1e-9, "{row:?}");
            assert!(row.oracle.is_none() && row.per_active_user.is_none());
        }
    }

    #[test]
    fn apc_closed_form_path_matches_general_path() {
        let profile = ChannelProfile::sho_real(1.0, 0.9).unwrap();
        let model = ActivityModel::new(3, 0.4, 2.0).unwrap();
        let dist = apc_distribution(&model);
        let closed = analytic_mcp(&profile, Scheme::Apc, &model, &dist).unwrap();
        assert!((closed - mcp_rate(&profile, &dist).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn failing_rows_are_marked() {
        let mut spec = SweepSpec::new(SweptParameter::Q, vec![0.5, 1.0]);
        spec.per_active_user = true;
        spec.schemes = vec![Scheme::Apc];
        let result = run_sweep(&spec).unwrap();
        assert_eq!(result.rows.len(), 4);
        assert_eq!(result.failed().count(), 2);
        assert!(result.rows[0].error.is_none());
    }

    #[test]
    fn reproducible_with_validation() {
        let mut spec = SweepSpec::new(SweptParameter::Alpha1, vec![0.0, 0.5]);
        spec.validate = Some(SimConfig::new(40, 4, 9).unwrap());
        let a = run_sweep(&spec).unwrap();
        let b = run_sweep(&spec).unwrap();
        assert_eq!(a, b);
        assert!(a.rows.iter().all(|r| r.oracle.is_some()));
    }
}
