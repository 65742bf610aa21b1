//! Uplink throughput of a linear cellular array with randomly active users.
//!
//! The crate evaluates the large-system per-cell rate with joint multicell
//! processing (as an ISI channel with flat fading) and with single-cell
//! processing, for no, adaptive and cognitive power control, and checks both
//! against a finite-size Monte Carlo log-det estimate.

pub mod channel;
pub mod error;
pub mod harness;
pub mod mc_oracle;
pub mod mcp_rate;
pub mod power_control;
pub mod quadrature;
pub mod root;
pub mod scp_rate;
pub mod selftest;

pub use channel::{log_integral, psd, resolvent_integral, ChannelProfile};
pub use error::{Error, Result};
pub use mc_oracle::{estimate_throughput, sample_throughput, SimConfig};
pub use mcp_rate::{
    mcp_rate, mcp_rate_erasure, mcp_rate_general, relative_entropy_bernoulli,
    sho_apc_beta_closed_form, sho_apc_rate, solve_beta_erasure, solve_fixed_point, FixedPoint,
};
pub use power_control::{
    apc_distribution, cpc_distribution, mean_gain, npc_distribution, ActivityModel, Scheme,
    VirtualGainDistribution,
};
pub use scp_rate::{scp_rate, scp_rate_exact, scp_rate_mc};
