//! Runtime invariant suite behind `uplink selftest`.

use crate::channel::{
    log_integral, log_integral_quadrature, psd, resolvent_integral, resolvent_integral_quadrature,
    ChannelProfile,
};
use crate::error::Result;
use crate::harness::{check_orderings, preset, run_sweep, Figure, Processing};
use crate::mcp_rate::{
    mcp_rate, mcp_rate_erasure, mcp_rate_general, sho_apc_beta_closed_form, solve_beta_erasure,
};
use crate::power_control::{
    distribution_for, mean_power_closed_form, ActivityModel, Scheme, VirtualGainDistribution,
};
use crate::quadrature::integrate_unit;
use crate::scp_rate::{scp_rate_exact, scp_rate_mc};
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, worst: f64, tol: f64) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: worst <= tol,
        detail: format!("worst deviation {worst:.3e} (tolerance {tol:.0e})"),
    }
}

fn closed_forms() -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for (a0, a1) in [(1.0, 0.5), (1.0, 1.0), (0.3, 1.2), (1.0, 0.0)] {
        let p = ChannelProfile::sho_real(a0, a1).unwrap();
        for x in [0.1, 1.0, 3.0, 10.0] {
            worst = worst
                .max((log_integral(&p, x) - log_integral_quadrature(&p, x)).abs())
                .max((resolvent_integral(&p, x) - resolvent_integral_quadrature(&p, x)).abs());
        }
        worst = worst.max((integrate_unit(|f| psd(&p, f)) - p.energy()).abs());
    }
    outcome("two-tap closed forms vs quadrature", worst, 1e-10)
}

fn moments() -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for k in 1..=12 {
        for q in [0.0, 0.1, 0.3, 0.7, 1.0] {
            let m = ActivityModel::new(k, q, 2.0).unwrap();
            for s in Scheme::ALL {
                let d = distribution_for(s, &m).unwrap();
                worst = worst.max((d.mean() - mean_power_closed_form(s, &m).unwrap()).abs());
            }
        }
    }
    outcome("virtual power means", worst, 1e-12)
}

fn erasure_consistency() -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for a1 in [0.0, 0.5, 1.0] {
        let p = ChannelProfile::sho_real(1.0, a1)?;
        for qt in [0.05, 0.3, 0.8] {
            for power in [0.5, 3.0, 30.0] {
                let e = mcp_rate_erasure(&p, qt, power)?;
                let g1 = mcp_rate(&p, &VirtualGainDistribution::bernoulli(qt, power)?)?;
                let g2 =
                    mcp_rate_general(&p, &VirtualGainDistribution::bernoulli(qt, 1.0)?, power)?;
                worst = worst.max((e - g1).abs()).max((e - g2).abs());
            }
        }
    }
    Ok(outcome("erasure vs general fixed point", worst, 1e-8))
}

fn explicit_beta() -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for a1 in [0.2, 0.5, 1.0] {
        let p = ChannelProfile::sho_real(1.0, a1)?;
        for k in [1, 3, 5] {
            for q in [0.2, 0.5, 0.8] {
                let power = 3.0;
                let closed = sho_apc_beta_closed_form(
                    Complex64::new(1.0, 0.0),
                    Complex64::new(a1, 0.0),
                    k,
                    q,
                    power,
                )?;
                let bisected = solve_beta_erasure(&p, q.powi(k as i32), power)?;
                worst = worst.max((closed - bisected).abs());
            }
        }
    }
    Ok(outcome("explicit SHO-APC beta vs bisection", worst, 1e-9))
}

fn scp_mc() -> Result<CheckOutcome> {
    let p = ChannelProfile::sho_real(1.0, 0.5)?;
    let d = distribution_for(Scheme::Npc, &ActivityModel::new(3, 0.4, 4.0)?)?;
    let exact = scp_rate_exact(&p, &d)?;
    let (mean, se) = scp_rate_mc(&p, &d, 100_000, 1)?;
    Ok(CheckOutcome {
        name: "SCP enumeration vs Monte Carlo",
        passed: (exact - mean).abs() <= 4.0 * se,
        detail: format!("exact {exact:.6}, MC {mean:.6} ± {se:.2e}"),
    })
}

fn preset_orderings() -> Result<CheckOutcome> {
    let mut violations = Vec::new();
    for f in Figure::ALL {
        let result = run_sweep(&preset(f))?;
        violations.extend(
            check_orderings(&result)
                .into_iter()
                .map(|v| format!("{f} {v}")),
        );
        let failure = result
            .failed()
            .next()
            .map(|row| format!("{f} row failed: {:?}", row.error));
        violations.extend(failure);
    }
    Ok(CheckOutcome {
        name: "MCP >= SCP and CPC >= APC >= NPC on all presets",
        passed: violations.is_empty(),
        detail: if violations.is_empty() {
            "no violations".into()
        } else {
            violations.join("; ")
        },
    })
}

fn q_zero_coincidence() -> Result<CheckOutcome> {
    let p = ChannelProfile::sho_real(1.0, 0.5)?;
    let m = ActivityModel::new(5, 0.0, 3.0)?;
    let rates: Vec<f64> = Scheme::ALL
        .iter()
        .map(|&s| mcp_rate(&p, &distribution_for(s, &m)?))
        .collect::<Result<_>>()?;
    let spread = rates.iter().cloned().fold(f64::MIN, f64::max)
        - rates.iter().cloned().fold(f64::MAX, f64::min);
    Ok(outcome("schemes coincide at q = 0", spread, 1e-9))
}

fn alpha_zero_coincidence() -> Result<CheckOutcome> {
    let result = run_sweep(&preset(Figure::Fig6))?;
    let mut worst: f64 = 0.0;
    for s in Scheme::ALL {
        let m = result.curve(s, Processing::Mcp)[0].1;
        let c = result.curve(s, Processing::Scp)[0].1;
        worst = worst.max((m - c).abs());
    }
    Ok(outcome(
        "MCP and SCP coincide without interference",
        worst,
        1e-9,
    ))
}

/// Runs every check; an `Err` means a check could not be evaluated.
pub fn run_selftest() -> Result<Vec<CheckOutcome>> {
    Ok(vec![
        closed_forms(),
        moments(),
        erasure_consistency()?,
        explicit_beta()?,
        scp_mc()?,
        q_zero_coincidence()?,
        alpha_zero_coincidence()?,
        preset_orderings()?,
    ])
}
