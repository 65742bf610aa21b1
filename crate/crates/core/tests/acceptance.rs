//! Exit criteria. Each criterion is one test and prints a single
//! `PASS`/`FAIL` line; run with `--nocapture` to see them all.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uplink_core::channel::{log_integral, resolvent_integral};
use uplink_core::harness::{db_to_linear, preset, run_sweep, Figure, Processing, SweepResult};
use uplink_core::mc_oracle::reduced_log_det;
use uplink_core::quadrature::CompositeRule;
use uplink_core::{
    apc_distribution, cpc_distribution, estimate_throughput, mcp_rate, mcp_rate_erasure,
    mcp_rate_general, npc_distribution, scp_rate_exact, scp_rate_mc, sho_apc_beta_closed_form,
    sho_apc_rate, solve_beta_erasure, ActivityModel, ChannelProfile, Scheme, SimConfig,
    VirtualGainDistribution,
};

fn report(id: &str, name: &str, passed: bool, detail: &str) {
    println!(
        "{} [{id}] {name}: {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
    assert!(passed, "criterion {id} ({name}) failed: {detail}");
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn law(scheme: Scheme, model: &ActivityModel) -> VirtualGainDistribution {
    match scheme {
        Scheme::Npc => npc_distribution(model),
        Scheme::Apc => apc_distribution(model),
        Scheme::Cpc => cpc_distribution(model),
        Scheme::Custom => unreachable!(),
    }
}

#[test]
fn c01_analytic_vs_monte_carlo_oracle() {
    let start = std::time::Instant::now();
    let power = db_to_linear(5.0);
    let model = ActivityModel::new(5, 0.3, power).unwrap();
    let cfg = SimConfig::new(400, 50, 2024).unwrap();
    let mut failures = Vec::new();
    let mut worst_ratio: f64 = 0.0;
    let mut points = 0;
    for a1 in [0.25, 0.5, 0.9] {
        let profile = ChannelProfile::sho_real(1.0, a1).unwrap();
        for scheme in Scheme::ALL {
            let dist = law(scheme, &model);
            let analytic = mcp_rate(&profile, &dist).unwrap();
            let (mean, se) = estimate_throughput(&profile, &dist, &cfg).unwrap();
            let allowed = (3.0 * se).max(0.02 * analytic.abs());
            let dev = (analytic - mean).abs();
            worst_ratio = worst_ratio.max(dev / allowed);
            points += 1;
            if dev > allowed {
                failures.push(format!(
                    "α1={a1} {scheme}: analytic {analytic:.6} oracle {mean:.6}±{se:.2e}"
                ));
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let passed = failures.is_empty() && elapsed < 60.0;
    report(
        "1",
        "analytic MCP vs log-det oracle (M=400, 50 trials)",
        passed,
        &format!(
            "{points} points, worst |Δ|/allowed = {worst_ratio:.3}, {elapsed:.2}s {}",
            failures.join("; ")
        ),
    );
}

/// Dense `log₂ det(I + H E Q E† H†)` with the full `M × MK` channel matrix.
fn full_log_det(profile: &ChannelProfile, users: usize, active: &[bool], powers: &[f64]) -> f64 {
    let m = active.len() / users;
    let mut h = DMatrix::<Complex64>::zeros(m, m * users);
    for row in 0..m {
        for n in 0..m {
            for k in 0..users {
                h[(row, n * users + k)] = profile.tap(n as isize - row as isize);
            }
        }
    }
    let diag: Vec<Complex64> = active
        .iter()
        .zip(powers)
        .map(|(&e, &p)| if e { real(p) } else { real(0.0) })
        .collect();
    // E Q E† with E ∈ {0,1} is diag(e·p).
    let eqe = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag));
    let g = DMatrix::<Complex64>::identity(m, m) + &h * eqe * h.adjoint();
    let chol = g.cholesky().expect("G is positive definite");
    let l = chol.l();
    (0..m).map(|i| 2.0 * l[(i, i)].re.ln()).sum::<f64>() / std::f64::consts::LN_2
}

#[test]
fn c02_reduction_to_one_virtual_user_per_cell() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let m = rng.random_range(1..=8usize);
        let users = rng.random_range(1..=3usize);
        let width = rng.random_range(1..=m.min(4));
        let l1 = rng.random_range(0..width);
        let taps: Vec<Complex64> = (0..width)
            .map(|_| Complex64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)))
            .collect();
        let profile = ChannelProfile::new(l1, width - 1 - l1, taps).unwrap();
        let active: Vec<bool> = (0..m * users).map(|_| rng.random_bool(0.6)).collect();
        let powers: Vec<f64> = (0..m * users).map(|_| rng.random_range(0.0..4.0)).collect();
        let gains: Vec<f64> = (0..m)
            .map(|n| {
                (0..users)
                    .filter(|&k| active[n * users + k])
                    .map(|k| powers[n * users + k])
                    .sum()
            })
            .collect();
        let full = full_log_det(&profile, users, &active, &powers) / m as f64;
        let reduced = reduced_log_det(&profile, &gains).unwrap() / m as f64;
        worst = worst.max((full - reduced).abs());
    }
    report(
        "2",
        "full M×MK log-det equals reduced M×M log-det",
        worst <= 1e-12,
        &format!("200 instances, worst |Δ| = {worst:.3e} (tol 1e-12)"),
    );
}

#[test]
fn c03_erasure_and_general_formulas_agree() {
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for q_tilde in [0.01, 0.1, 0.3, 0.6, 0.9] {
        for power in [0.3, 1.0, db_to_linear(5.0), 10.0, 100.0] {
            for a1 in [0.5, 1.0] {
                let profile = ChannelProfile::sho_real(1.0, a1).unwrap();
                let erasure = mcp_rate_erasure(&profile, q_tilde, power).unwrap();
                let carried = mcp_rate_general(
                    &profile,
                    &VirtualGainDistribution::bernoulli(q_tilde, power).unwrap(),
                    1.0,
                )
                .unwrap();
                let scaled = mcp_rate_general(
                    &profile,
                    &VirtualGainDistribution::bernoulli(q_tilde, 1.0).unwrap(),
                    power,
                )
                .unwrap();
                worst = worst
                    .max((erasure - carried).abs())
                    .max((erasure - scaled).abs());
                n += 1;
            }
        }
    }
    report(
        "3",
        "erasure vs general fixed point (both γ conventions)",
        worst <= 1e-8 && n == 50,
        &format!("{n} points, worst |Δ| = {worst:.3e} (tol 1e-8)"),
    );
}

#[test]
fn c04_explicit_beta_matches_bisection() {
    let mut worst: f64 = 0.0;
    let mut n = 0;
    let mut errors = Vec::new();
    for users in [1u32, 2, 5, 10, 20] {
        for q in [0.1f64, 0.3, 0.5, 0.7, 0.9] {
            for power in [1.0, 10.0] {
                for a1 in [0.5, 1.0] {
                    n += 1;
                    let profile = ChannelProfile::sho_real(1.0, a1).unwrap();
                    match sho_apc_beta_closed_form(real(1.0), real(a1), users, q, power) {
                        Ok(closed) => {
                            let bisected =
                                solve_beta_erasure(&profile, q.powi(users as i32), power).unwrap();
                            worst = worst.max((closed - bisected).abs());
                        }
                        Err(e) => errors.push(format!("K={users} q={q} P={power} α1={a1}: {e}")),
                    }
                }
            }
        }
    }
    report(
        "4",
        "explicit SHO-APC β vs bisection (incl. α0 = α1)",
        worst <= 1e-9 && errors.is_empty() && n == 100,
        &format!(
            "{n} points, worst |Δ| = {worst:.3e} (tol 1e-9) {}",
            errors.join("; ")
        ),
    );
}

#[test]
fn c05_two_tap_closed_forms_match_quadrature() {
    let rule = CompositeRule::new(64, 64);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let a0 = Complex64::from_polar(rng.random_range(0.05..1.5), rng.random_range(-PI..PI));
        let a1 = Complex64::from_polar(rng.random_range(0.0..1.5), rng.random_range(-PI..PI));
        let x = rng.random_range(0.0..10.0);
        let spectrum = |f: f64| (a0 + a1 * Complex64::from_polar(1.0, -2.0 * PI * f)).norm_sqr();
        let log_q = rule.integrate(|f| (1.0 + x * spectrum(f)).log2());
        let res_q = rule.integrate(|f| 1.0 / (1.0 + x * spectrum(f)));
        let profile = ChannelProfile::sho(a0, a1).unwrap();
        worst = worst
            .max((log_integral(&profile, x) - log_q).abs())
            .max((resolvent_integral(&profile, x) - res_q).abs());
    }
    report(
        "5",
        "two-tap spectral closed forms vs 4096-node quadrature",
        worst <= 1e-10,
        &format!("50 random (taps, x), worst |Δ| = {worst:.3e} (tol 1e-10)"),
    );
}

#[test]
fn c06_flat_spectrum_reduces_to_memoryless_channel() {
    let mut worst: f64 = 0.0;
    for users in [1u32, 2, 5, 10] {
        for q in [0.1f64, 0.3, 0.5, 0.8] {
            for power_db in [-5.0, 0.0, 5.0, 10.0, 20.0] {
                let power = db_to_linear(power_db);
                let oracle = (1.0 - q.powi(users as i32)) * (1.0 + power).log2();
                let closed = sho_apc_rate(real(1.0), real(0.0), users, q, power).unwrap();
                let general = mcp_rate(
                    &ChannelProfile::sho_real(1.0, 0.0).unwrap(),
                    &apc_distribution(&ActivityModel::new(users, q, power).unwrap()),
                )
                .unwrap();
                worst = worst
                    .max((closed - oracle).abs())
                    .max((general - oracle).abs());
            }
        }
    }
    let example = sho_apc_rate(real(1.0), real(0.0), 1, 0.3, db_to_linear(5.0)).unwrap();
    report(
        "6",
        "α1 = 0 MCP-APC equals (1 − q^K) log2(1 + P)",
        worst <= 1e-9,
        &format!("worst |Δ| = {worst:.3e} (tol 1e-9); q̃=0.3, P=5 dB → {example:.6}"),
    );
}

#[test]
fn c07_moment_identities() {
    let mut worst: f64 = 0.0;
    for users in 1..=12u32 {
        for q in [0.0f64, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0] {
            for power in [0.5, 1.0, db_to_linear(5.0), 10.0] {
                let m = ActivityModel::new(users, q, power).unwrap();
                let k = users as f64;
                let qk = q.powi(users as i32);
                let expected = [
                    power * (1.0 - q),
                    power * (1.0 - qk),
                    power * (1.0 + k * q - (k + 1.0) * qk),
                ];
                for (scheme, want) in Scheme::ALL.into_iter().zip(expected) {
                    let atom_sum: f64 = law(scheme, &m)
                        .atoms()
                        .iter()
                        .map(|a| a.prob * a.gain_sq)
                        .sum();
                    worst = worst.max((atom_sum - want).abs());
                }
            }
        }
    }
    let var = |users| npc_distribution(&ActivityModel::new(users, 0.3, 1.0).unwrap()).variance();
    let (v5, v20, v200) = (var(5), var(20), var(200));
    report(
        "7",
        "virtual power means and NPC consolidation",
        worst <= 1e-12 && v200 < v20 && v20 < v5,
        &format!("worst mean |Δ| = {worst:.3e} (tol 1e-12); Var NPC K=5,20,200: {v5:.4e} > {v20:.4e} > {v200:.4e}"),
    );
}

fn sweep(figure: Figure) -> SweepResult {
    let r = run_sweep(&preset(figure)).unwrap();
    assert_eq!(r.failed().count(), 0, "{figure}: failed rows");
    r
}

fn rate_at(curve: &[(f64, f64)], x: f64) -> f64 {
    curve
        .iter()
        .find(|p| p.0 == x)
        .expect("grid point present")
        .1
}

#[test]
fn c08a_fig3_mcp_unbounded_scp_saturating() {
    let r = sweep(Figure::Fig3);
    let mut ok = true;
    let mut detail = Vec::new();
    for scheme in Scheme::ALL {
        let scp = r.curve(scheme, Processing::Scp);
        let mcp = r.curve(scheme, Processing::Mcp);
        let scp_gain = rate_at(&scp, 20.0) - rate_at(&scp, 14.0);
        let mcp_gain = rate_at(&mcp, 20.0) - rate_at(&mcp, 14.0);
        ok &= scp_gain < 0.15 && mcp_gain > 1.2;
        detail.push(format!(
            "{scheme}: SCP +{scp_gain:.4} (<0.15), MCP +{mcp_gain:.4} (>1.2)"
        ));
    }
    report(
        "8/fig3",
        "rate gain from 14 to 20 dB",
        ok,
        &detail.join("; "),
    );
}

#[test]
fn c08b_fig4_per_active_user_rates_nondecreasing_in_q() {
    let r = sweep(Figure::Fig4);
    let mut bad = Vec::new();
    for scheme in Scheme::ALL {
        for processing in Processing::ALL {
            let c = r.per_user_curve(scheme, processing);
            assert_eq!(c.len(), 20);
            if c.windows(2).any(|w| w[1].1 < w[0].1) {
                bad.push(format!("{processing}-{scheme}"));
            }
        }
    }
    report(
        "8/fig4",
        "per-active-user rates nondecreasing in q",
        bad.is_empty(),
        &format!("6 curves over q = 0..0.95; decreasing: {bad:?}"),
    );
}

#[test]
fn c08c_fig5_mcp_cpc_dominates_for_k_at_least_two() {
    let r = sweep(Figure::Fig5);
    let cpc = r.curve(Scheme::Cpc, Processing::Mcp);
    let mut min_margin = f64::INFINITY;
    for &(k, rate) in cpc.iter().filter(|p| p.0 >= 2.0) {
        for scheme in Scheme::ALL {
            for processing in Processing::ALL {
                if (scheme, processing) == (Scheme::Cpc, Processing::Mcp) {
                    continue;
                }
                let other = rate_at(&r.curve(scheme, processing), k);
                min_margin = min_margin.min(rate - other);
            }
        }
    }
    report(
        "8/fig5",
        "MCP-CPC strictly above every other curve for K ≥ 2",
        min_margin > 0.0,
        &format!("smallest margin {min_margin:.4} bits over K = 2..30"),
    );
}

#[test]
fn c08d_fig6_monotone_in_alpha_and_coincident_at_zero() {
    let r = sweep(Figure::Fig6);
    let mut ok = true;
    let mut worst_gap: f64 = 0.0;
    let mut detail = Vec::new();
    for scheme in Scheme::ALL {
        let mcp = r.curve(scheme, Processing::Mcp);
        let scp = r.curve(scheme, Processing::Scp);
        let mcp_up = mcp.windows(2).all(|w| w[1].1 >= w[0].1);
        let scp_down = scp.windows(2).all(|w| w[1].1 <= w[0].1);
        let gap = (mcp[0].1 - scp[0].1).abs();
        worst_gap = worst_gap.max(gap);
        ok &= mcp_up && scp_down && mcp[0].0 == 0.0 && gap <= 1e-9;
        detail.push(format!(
            "{scheme}: MCP nondecreasing {mcp_up}, SCP nonincreasing {scp_down}"
        ));
    }
    report(
        "8/fig6",
        "MCP up, SCP down in α; coincide at α = 0",
        ok,
        &format!("{}; worst gap at α=0 {worst_gap:.2e}", detail.join("; ")),
    );
}

#[test]
fn c09_ordering_invariants_on_every_row() {
    let mut checked = 0;
    let mut bad = Vec::new();
    for figure in Figure::ALL {
        let r = sweep(figure);
        let mut values: Vec<f64> = r.rows.iter().map(|row| row.value).collect();
        values.dedup();
        for v in values {
            let get = |s: Scheme, p: Processing| rate_at(&r.curve(s, p), v);
            for s in Scheme::ALL {
                checked += 1;
                if get(s, Processing::Mcp) < get(s, Processing::Scp) - 1e-9 {
                    bad.push(format!("{figure} {v}: MCP-{s} < SCP-{s}"));
                }
            }
            let (n, a, c) = (
                get(Scheme::Npc, Processing::Mcp),
                get(Scheme::Apc, Processing::Mcp),
                get(Scheme::Cpc, Processing::Mcp),
            );
            checked += 1;
            if c < a - 1e-9 || a < n - 1e-9 {
                bad.push(format!("{figure} {v}: CPC {c} APC {a} NPC {n}"));
            }
        }
    }
    report(
        "9",
        "MCP ≥ SCP and MCP-CPC ≥ MCP-APC ≥ MCP-NPC",
        bad.is_empty(),
        &format!("{checked} comparisons across fig3–fig6 {}", bad.join("; ")),
    );
}

/// Mean and variance of `log₂(1 + |α0|² g0 / (1 + |α1|² g1))` over
/// independent `g0, g1`, by direct double sum.
fn sho_scp_moments(a1: f64, dist: &VirtualGainDistribution) -> (f64, f64) {
    let (mut m1, mut m2) = (0.0, 0.0);
    for x in dist.atoms() {
        for y in dist.atoms() {
            let v = (1.0 + x.gain_sq / (1.0 + a1 * a1 * y.gain_sq)).log2();
            m1 += x.prob * y.prob * v;
            m2 += x.prob * y.prob * v * v;
        }
    }
    (m1, (m2 - m1 * m1).max(0.0))
}

#[test]
fn c10_scp_exact_vs_monte_carlo() {
    const SAMPLES: u64 = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    let mut worst_enum: f64 = 0.0;
    let mut min_sample_se = f64::INFINITY;
    for i in 0..20u64 {
        let users = rng.random_range(1..=8u32);
        let q = rng.random_range(0.05..0.9);
        let power = db_to_linear(rng.random_range(-5.0..20.0));
        let a1 = rng.random_range(0.0..1.2);
        let scheme = Scheme::ALL[rng.random_range(0..3usize)];
        let profile = ChannelProfile::sho_real(1.0, a1).unwrap();
        let dist = law(scheme, &ActivityModel::new(users, q, power).unwrap());
        let exact = scp_rate_exact(&profile, &dist).unwrap();
        let (mean, sample_se) = scp_rate_mc(&profile, &dist, SAMPLES, 1000 + i).unwrap();
        let (m, var) = sho_scp_moments(a1, &dist);
        let se = (var / SAMPLES as f64).sqrt();
        worst_enum = worst_enum.max((m - exact).abs());
        min_sample_se = min_sample_se.min(sample_se);
        worst = worst.max((exact - mean).abs() / se);
    }
    report(
        "10",
        "SCP Monte Carlo (1e5 samples) within 3 standard errors of enumeration",
        worst <= 3.0 && worst_enum <= 1e-12,
        &format!(
            "20 random SHO configurations, worst |Δ|/stderr = {worst:.3}; \
             enumeration vs double sum {worst_enum:.1e}; smallest sample stderr {min_sample_se:.1e}"
        ),
    );
}
