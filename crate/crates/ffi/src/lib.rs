//! C ABI for `uplink-core`.
//!
//! Profiles and gain laws are opaque heap handles created by `*_new`
//! functions and released with the matching `*_free`. Every fallible call
//! returns an [`UplinkStatus`] and writes results through out-pointers,
//! which are left untouched on failure.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use num_complex::Complex64;
use uplink_core::{
    channel, mc_oracle, mcp_rate, power_control, scp_rate, ActivityModel, ChannelProfile, Error,
    SimConfig, VirtualGainDistribution,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UplinkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NoBracket = 3,
    NoConvergence = 4,
    DegenerateTaps = 5,
    SupportTooLarge = 6,
    NumericalFailure = 7,
    DivisionByZero = 8,
    Panic = 9,
}

impl From<&Error> for UplinkStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::NoBracket { .. } => UplinkStatus::NoBracket,
            Error::NoConvergence { .. } => UplinkStatus::NoConvergence,
            Error::DegenerateTaps => UplinkStatus::DegenerateTaps,
            Error::SupportTooLarge { .. } => UplinkStatus::SupportTooLarge,
            Error::NumericalFailure { .. } => UplinkStatus::NumericalFailure,
            Error::DivisionByZero => UplinkStatus::DivisionByZero,
            _ => UplinkStatus::InvalidArgument,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UplinkScheme {
    Npc = 0,
    Apc = 1,
    Cpc = 2,
}

/// Opaque channel profile.
pub struct UplinkProfile(ChannelProfile);

/// Opaque virtual-gain law.
pub struct UplinkDistribution(VirtualGainDistribution);

fn guard<F: FnOnce() -> Result<(), UplinkStatus>>(f: F) -> UplinkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UplinkStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => UplinkStatus::Panic,
    }
}

fn lift<T>(r: uplink_core::Result<T>) -> Result<T, UplinkStatus> {
    r.map_err(|e| UplinkStatus::from(&e))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), UplinkStatus> {
    if out.is_null() {
        return Err(UplinkStatus::NullPointer);
    }
    out.write(value);
    Ok(())
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, UplinkStatus> {
    p.as_ref().ok_or(UplinkStatus::NullPointer)
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn uplink_status_string(status: UplinkStatus) -> *const c_char {
    let s: &'static CStr = match status {
        UplinkStatus::Ok => c"ok",
        UplinkStatus::NullPointer => c"null pointer argument",
        UplinkStatus::InvalidArgument => c"invalid argument",
        UplinkStatus::NoBracket => c"fixed point has no bracket (silent gain law?)",
        UplinkStatus::NoConvergence => c"fixed point did not converge",
        UplinkStatus::DegenerateTaps => c"closed-form denominator vanishes",
        UplinkStatus::SupportTooLarge => c"support too large for exact enumeration",
        UplinkStatus::NumericalFailure => c"band factorization failed",
        UplinkStatus::DivisionByZero => c"division by zero",
        UplinkStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

#[no_mangle]
pub extern "C" fn uplink_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a profile from `n_taps` taps `α_{-l1}..α_{l2}`. `taps_im` may be NULL
/// for real taps.
///
/// # Safety
/// `taps_re` (and `taps_im` if non-NULL) must point to `n_taps` doubles.
#[no_mangle]
pub unsafe extern "C" fn uplink_profile_new(
    taps_re: *const f64,
    taps_im: *const f64,
    n_taps: usize,
    l1: usize,
    out: *mut *mut UplinkProfile,
) -> UplinkStatus {
    guard(|| {
        if taps_re.is_null() || out.is_null() {
            return Err(UplinkStatus::NullPointer);
        }
        if n_taps <= l1 {
            return Err(UplinkStatus::InvalidArgument);
        }
        let re = slice::from_raw_parts(taps_re, n_taps);
        let taps: Vec<Complex64> = if taps_im.is_null() {
            re.iter().map(|&r| Complex64::new(r, 0.0)).collect()
        } else {
            let im = slice::from_raw_parts(taps_im, n_taps);
            re.iter()
                .zip(im)
                .map(|(&r, &i)| Complex64::new(r, i))
                .collect()
        };
        let profile = lift(ChannelProfile::new(l1, n_taps - 1 - l1, taps))?;
        put(out, Box::into_raw(Box::new(UplinkProfile(profile))))
    })
}

/// Real two-tap soft-handoff profile.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uplink_profile_sho(
    alpha0: f64,
    alpha1: f64,
    out: *mut *mut UplinkProfile,
) -> UplinkStatus {
    guard(|| {
        let profile = lift(ChannelProfile::sho_real(alpha0, alpha1))?;
        put(out, Box::into_raw(Box::new(UplinkProfile(profile))))
    })
}

/// # Safety
/// `profile` must come from `uplink_profile_*` and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn uplink_profile_free(profile: *mut UplinkProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uplink_psd(
    profile: *const UplinkProfile,
    f: f64,
    out: *mut f64,
) -> UplinkStatus {
    guard(|| put(out, channel::psd(&borrow(profile)?.0, f)))
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uplink_log_integral(
    profile: *const UplinkProfile,
    x: f64,
    out: *mut f64,
) -> UplinkStatus {
    guard(|| {
        if x.is_nan() || x < 0.0 {
            return Err(UplinkStatus::InvalidArgument);
        }
        put(out, channel::log_integral(&borrow(profile)?.0, x))
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uplink_resolvent_integral(
    profile: *const UplinkProfile,
    x: f64,
    out: *mut f64,
) -> UplinkStatus {
    guard(|| {
        if x.is_nan() || x < 0.0 {
            return Err(UplinkStatus::InvalidArgument);
        }
        put(out, channel::resolvent_integral(&borrow(profile)?.0, x))
    })
}

/// Gain law of a power-control scheme for `users` users, non-activity `q`
/// and linear cell power `power`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uplink_distribution_scheme(
    scheme: UplinkScheme,
    users: u32,
    q: f64,
    power: f64,
    out: *mut *mut UplinkDistribution,
) -> UplinkStatus {
    guard(|| {
        let model = lift(ActivityModel::new(users, q, power))?;
        let dist = match scheme {
            UplinkScheme::Npc => power_control::npc_distribution(&model),
            UplinkScheme::Apc => power_control::apc_distribution(&model),
            UplinkScheme::Cpc => power_control::cpc_distribution(&model),
        };
        put(out, Box::into_raw(Box::new(UplinkDistribution(dist))))
    })
}

/// Arbitrary gain law from `n` (gain², mass) pairs.
///
/// # Safety
/// `gains_sq` and `probs` must point to `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn uplink_distribution_custom(
    gains_sq: *const f64,
    probs: *const f64,
    n: usize,
    out: *mut *mut UplinkDistribution,
) -> UplinkStatus {
    guard(|| {
        if gains_sq.is_null() || probs.is_null() {
            return Err(UplinkStatus::NullPointer);
        }
        let g = slice::from_raw_parts(gains_sq, n);
        let p = slice::from_raw_parts(probs, n);
        let pairs: Vec<(f64, f64)> = g.iter().copied().zip(p.iter().copied()).collect();
        let dist = lift(VirtualGainDistribution::custom(&pairs))?;
        put(out, Box::into_raw(Box::new(UplinkDistribution(dist))))
    })
}

/// # Safety
/// `dist` must come from `uplink_distribution_*` and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn uplink_distribution_free(dist: *mut UplinkDistribution) {
    if !dist.is_null() {
        drop(Box::from_raw(dist));
    }
}

/// Number of atoms after merging and pruning; 0 for NULL.
///
/// # Safety
/// `dist` must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn uplink_distribution_len(dist: *const UplinkDistribution) -> usize {
    dist.as_ref().map_or(0, |d| d.0.atoms().len())
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uplink_distribution_atom(
    dist: *const UplinkDistribution,
    index: usize,
    gain_sq: *mut f64,
    prob: *mut f64,
) -> UplinkStatus {
    guard(|| {
        let atom = *borrow(dist)?
            .0
            .atoms()
            .get(index)
            .ok_or(UplinkStatus::InvalidArgument)?;
        if gain_sq.is_null() || prob.is_null() {
            return Err(UplinkStatus::NullPointer);
        }
        put(gain_sq, atom.gain_sq)?;
        put(prob, atom.prob)
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uplink_distribution_mean(
    dist: *const UplinkDistribution,
    out: *mut f64,
) -> UplinkStatus {
    guard(|| put(out, power_control::mean_gain(&borrow(dist)?.0)))
}

/// MCP rate with fading scale `gamma` (use 1 when the law carries the power).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uplink_mcp_rate(
    profile: *const UplinkProfile,
    dist: *const UplinkDistribution,
    gamma: f64,
    out: *mut f64,
) -> UplinkStatus {
    guard(|| {
        let r = lift(mcp_rate::mcp_rate_general(
            &borrow(profile)?.0,
            &borrow(dist)?.0,
            gamma,
        ))?;
        put(out, r)
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uplink_mcp_rate_erasure(
    profile: *const UplinkProfile,
    q_tilde: f64,
    gamma: f64,
    out: *mut f64,
) -> UplinkStatus {
    guard(|| {
        let r = lift(mcp_rate::mcp_rate_erasure(
            &borrow(profile)?.0,
            q_tilde,
            gamma,
        ))?;
        put(out, r)
    })
}

/// Closed-form soft-handoff MCP rate under adaptive power control.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uplink_sho_apc_rate(
    alpha0: f64,
    alpha1: f64,
    users: u32,
    q: f64,
    power: f64,
    out: *mut f64,
) -> UplinkStatus {
    guard(|| {
        let r = lift(mcp_rate::sho_apc_rate(
            Complex64::new(alpha0, 0.0),
            Complex64::new(alpha1, 0.0),
            users,
            q,
            power,
        ))?;
        put(out, r)
    })
}

/// SCP rate: exact enumeration, Monte Carlo beyond the enumeration cap.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uplink_scp_rate(
    profile: *const UplinkProfile,
    dist: *const UplinkDistribution,
    out: *mut f64,
) -> UplinkStatus {
    guard(|| {
        let r = lift(scp_rate::scp_rate(&borrow(profile)?.0, &borrow(dist)?.0))?;
        put(out, r)
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uplink_scp_rate_mc(
    profile: *const UplinkProfile,
    dist: *const UplinkDistribution,
    samples: u64,
    seed: u64,
    mean: *mut f64,
    stderr: *mut f64,
) -> UplinkStatus {
    guard(|| {
        if mean.is_null() || stderr.is_null() {
            return Err(UplinkStatus::NullPointer);
        }
        let (m, s) = lift(scp_rate::scp_rate_mc(
            &borrow(profile)?.0,
            &borrow(dist)?.0,
            samples,
            seed,
        ))?;
        put(mean, m)?;
        put(stderr, s)
    })
}

/// Finite-size log-det Monte Carlo estimate over `trials` arrays of `cells` cells.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uplink_oracle_estimate(
    profile: *const UplinkProfile,
    dist: *const UplinkDistribution,
    cells: usize,
    trials: usize,
    seed: u64,
    mean: *mut f64,
    stderr: *mut f64,
) -> UplinkStatus {
    guard(|| {
        if mean.is_null() || stderr.is_null() {
            return Err(UplinkStatus::NullPointer);
        }
        let cfg = lift(SimConfig::new(cells, trials, seed))?;
        let (m, s) = lift(mc_oracle::estimate_throughput(
            &borrow(profile)?.0,
            &borrow(dist)?.0,
            &cfg,
        ))?;
        put(mean, m)?;
        put(stderr, s)
    })
}
