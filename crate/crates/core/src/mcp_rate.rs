//! Per-cell throughput with joint multicell processing.
//!
//! Large-system throughput equals the ergodic rate of an ISI channel whose
//! output passes through i.i.d. flat fading `√γ A`:
//!
//! ```text
//! I(γ) = ∫ log₂(1 + γβS) + E log₂(1 + γν|A|²) − log₂(1 + γβν)
//! E[1/(1 + γν|A|²)] = 1/(1 + γβν) = ∫ 1/(1 + γβS)
//! ```
//!
//! For on/off fading (`A ∈ {0,1}`, off with probability `q̃`) the pair
//! collapses to a single equation in `β` and a Bernoulli divergence term.

use num_complex::Complex64;

use crate::channel::{log_integral, resolvent_integral, ChannelProfile};
use crate::error::{Error, Result};
use crate::power_control::VirtualGainDistribution;
use crate::root::bisect;

/// Residual tolerance of the general fixed point.
pub const FIXED_POINT_TOL: f64 = 1e-10;
/// Bracket width tolerance of the erasure bisection.
pub const ERASURE_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 200;
/// Starting bracket for `ν`.
const NU_LO: f64 = 1e-12;
const NU_HI: f64 = 1.0;
const EXPANSION_LIMIT: f64 = 1e300;
/// Closed-form denominators smaller than this are treated as zero.
const DEGENERATE_DENOMINATOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    pub beta: f64,
    pub nu: f64,
}

/// `E[1/(1 + u g)]`.
fn fading_resolvent(dist: &VirtualGainDistribution, u: f64) -> f64 {
    dist.expect(|g| 1.0 / (1.0 + u * g))
}

/// `β(ν)` from the first equality, written without the `1/E - 1` cancellation.
fn beta_for_nu(dist: &VirtualGainDistribution, gamma: f64, nu: f64) -> f64 {
    let u = gamma * nu;
    dist.expect(|g| g / (1.0 + u * g)) / fading_resolvent(dist, u)
}

/// Largest residual of the two fixed-point equalities at `fp`.
pub fn fixed_point_residual(
    profile: &ChannelProfile,
    dist: &VirtualGainDistribution,
    gamma: f64,
    fp: FixedPoint,
) -> f64 {
    let lhs = fading_resolvent(dist, gamma * fp.nu);
    let mid = 1.0 / (1.0 + gamma * fp.beta * fp.nu);
    let rhs = resolvent_integral(profile, gamma * fp.beta);
    (lhs - mid).abs().max((mid - rhs).abs())
}

/// Solves for `(β, ν)`.
///
/// The outer bisection runs on `ν`; for each candidate `β(ν)` closes the
/// fading equality and `F(ν) = E[1/(1+γν|A|²)] − ∫1/(1+γβ(ν)S)` is driven to
/// zero. `F` is positive near `ν = 0` and negative for large `ν`.
pub fn solve_fixed_point(
    profile: &ChannelProfile,
    dist: &VirtualGainDistribution,
    gamma: f64,
) -> Result<FixedPoint> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "gamma = {gamma} must be positive"
        )));
    }
    if dist.is_silent() {
        return Err(Error::NoBracket { upper: NU_HI });
    }
    let f = |nu: f64| {
        fading_resolvent(dist, gamma * nu)
            - resolvent_integral(profile, gamma * beta_for_nu(dist, gamma, nu))
    };

    let mut lo = NU_LO;
    while f(lo) <= 0.0 {
        lo *= 1e-10;
        if lo < 1e-300 {
            return Err(Error::NoBracket { upper: NU_HI });
        }
    }
    let mut hi = NU_HI;
    while f(hi) >= 0.0 {
        hi *= 10.0;
        if hi > EXPANSION_LIMIT {
            return Err(Error::NoBracket { upper: hi });
        }
    }

    let b = bisect(f, lo, hi, 0.0, 4.0 * f64::EPSILON, MAX_ITERATIONS);
    let fp = FixedPoint {
        beta: beta_for_nu(dist, gamma, b.root),
        nu: b.root,
    };
    let residual = fixed_point_residual(profile, dist, gamma, fp);
    if residual.is_nan() || residual >= FIXED_POINT_TOL {
        return Err(Error::NoConvergence {
            iterations: b.iterations,
            residual,
        });
    }
    Ok(fp)
}

/// Ergodic rate `I(γ)` of the ISI channel with flat fading law `dist`, in bits.
pub fn mcp_rate_general(
    profile: &ChannelProfile,
    dist: &VirtualGainDistribution,
    gamma: f64,
) -> Result<f64> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "gamma = {gamma} must be finite and >= 0"
        )));
    }
    if gamma == 0.0 || dist.is_silent() {
        return Ok(0.0);
    }
    if dist.is_deterministic() {
        return Ok(log_integral(profile, gamma * dist.atoms()[0].gain_sq));
    }
    let FixedPoint { beta, nu } = solve_fixed_point(profile, dist, gamma)?;
    let fading = dist.expect(|g| (gamma * nu * g).ln_1p()) / std::f64::consts::LN_2;
    Ok(log_integral(profile, gamma * beta) + fading - (gamma * beta * nu).log2_1p())
}

/// Cellular convention: `γ = 1`, the law carries the power.
pub fn mcp_rate(profile: &ChannelProfile, dist: &VirtualGainDistribution) -> Result<f64> {
    mcp_rate_general(profile, dist, 1.0)
}

trait Log2OnePlus {
    fn log2_1p(self) -> f64;
}

impl Log2OnePlus for f64 {
    fn log2_1p(self) -> f64 {
        self.ln_1p() / std::f64::consts::LN_2
    }
}

/// `q̃/(1−β) − ∫ 1/(1 + γβS)`; negative at `β = 0`, positive at `β = 1 − q̃`.
pub fn erasure_residual(profile: &ChannelProfile, q_tilde: f64, gamma: f64, beta: f64) -> f64 {
    q_tilde / (1.0 - beta) - resolvent_integral(profile, gamma * beta)
}

/// Root `β ∈ [0, 1 − q̃]` of the erasure fixed-point equation.
pub fn solve_beta_erasure(profile: &ChannelProfile, q_tilde: f64, gamma: f64) -> Result<f64> {
    if !(q_tilde > 0.0 && q_tilde < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "q_tilde = {q_tilde} must lie in (0, 1)"
        )));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "gamma = {gamma} must be positive"
        )));
    }
    let b = bisect(
        |beta| erasure_residual(profile, q_tilde, gamma, beta),
        0.0,
        1.0 - q_tilde,
        ERASURE_TOL * 1e-3,
        0.0,
        MAX_ITERATIONS,
    );
    Ok(b.root)
}

/// Binary relative entropy `d(a‖b)` in bits, `a` and `b` being the masses of
/// the same outcome. With `a = q̃` and `b = 1 − β` this is the divergence
/// between `Bernoulli(1 − q̃)` and `Bernoulli(β)`.
pub fn relative_entropy_bernoulli(q_tilde: f64, one_minus_beta: f64) -> f64 {
    fn term(p: f64, r: f64) -> f64 {
        if p == 0.0 {
            0.0
        } else if r == 0.0 {
            f64::INFINITY
        } else {
            p * (p / r).log2()
        }
    }
    term(q_tilde, one_minus_beta) + term(1.0 - q_tilde, 1.0 - one_minus_beta)
}

/// Rate of the on/off fading channel: `∫log₂(1+γβS) + d(q̃‖1−β)`.
pub fn mcp_rate_erasure(profile: &ChannelProfile, q_tilde: f64, gamma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q_tilde) {
        return Err(Error::InvalidArgument(format!(
            "q_tilde = {q_tilde} is not a probability"
        )));
    }
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "gamma = {gamma} must be finite and >= 0"
        )));
    }
    if q_tilde == 1.0 || gamma == 0.0 {
        return Ok(0.0);
    }
    if q_tilde == 0.0 {
        return Ok(log_integral(profile, gamma));
    }
    let beta = solve_beta_erasure(profile, q_tilde, gamma)?;
    Ok(log_integral(profile, gamma * beta) + relative_entropy_bernoulli(q_tilde, 1.0 - beta))
}

fn check_sho_apc_inputs(users: u32, q: f64, power: f64) -> Result<()> {
    if users == 0 {
        return Err(Error::InvalidModel(
            "need at least one user per cell".into(),
        ));
    }
    if !(0.0..1.0).contains(&q) {
        return Err(Error::InvalidArgument(format!(
            "q = {q} must lie in [0, 1)"
        )));
    }
    if !(power > 0.0 && power.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "power = {power} must be positive"
        )));
    }
    Ok(())
}

/// Explicit erasure `β` for a two-tap profile under adaptive power control
/// (`q̃ = q^K`, `γ = P`): the smaller root of
/// `(1 − β)² = q̃² (1 + 2Pβs + P²β²d²)` with `s = |α0|²+|α1|²`, `d = |α0|²−|α1|²`.
pub fn sho_apc_beta_closed_form(
    alpha0: Complex64,
    alpha1: Complex64,
    users: u32,
    q: f64,
    power: f64,
) -> Result<f64> {
    check_sho_apc_inputs(users, q, power)?;
    let (a0, a1) = (alpha0.norm_sqr(), alpha1.norm_sqr());
    let qk = q.powi(users as i32);
    let q2k = qk * qk;
    let p = power;
    let denominator = q2k * p * p * (a0 - a1).powi(2) - 1.0;
    if denominator.abs() < DEGENERATE_DENOMINATOR {
        return Err(Error::DegenerateTaps);
    }
    let radicand = 2.0 * p * (a0 + a1) + p * p * (a0 * a0 + a1 * a1)
        - 2.0 * p * p * a0 * a1 * (1.0 - 2.0 * q2k)
        + 1.0;
    let numerator = qk * radicand.sqrt() - q2k * p * (a0 + a1) - 1.0;
    Ok(numerator / denominator)
}

/// Closed-form MCP rate of the soft-handoff model under adaptive power control.
pub fn sho_apc_rate(
    alpha0: Complex64,
    alpha1: Complex64,
    users: u32,
    q: f64,
    power: f64,
) -> Result<f64> {
    check_sho_apc_inputs(users, q, power)?;
    let profile = ChannelProfile::sho(alpha0, alpha1)?;
    let qk = q.powi(users as i32);
    if qk == 0.0 {
        return Ok(log_integral(&profile, power));
    }
    let beta = match sho_apc_beta_closed_form(alpha0, alpha1, users, q, power) {
        Ok(beta) => beta,
        Err(Error::DegenerateTaps) => solve_beta_erasure(&profile, qk, power)?,
        Err(e) => return Err(e),
    };
    Ok(log_integral(&profile, power * beta) + relative_entropy_bernoulli(qk, 1.0 - beta))
}
