//! Link-level simulator for multi-IRS terahertz networks.
//!
//! The crate models cascaded source → IRS element → destination channels with
//! an angle-based trigonometric element gain, exponential molecular absorption
//! and exact per-element spreading loss, evaluates end-to-end SINR and sum
//! rate under co-phased reflection, and solves the one-to-one
//! source–IRS–destination association problem with a two-phase deferred
//! acceptance scheme. Exhaustive, partial-exhaustive, greedy and random
//! baselines plus a seeded Monte-Carlo sweep harness round out the toolkit.
//!
//! Modules:
//! - [`propagation`]: geometry, atmosphere and the per-element cascaded
//!   gain/pathloss model
//! - [`scenario`]: one concrete network instance (nodes, panels, radio)
//! - [`sinr`]: channel tensor, phase configuration, SINR and rate evaluation
//! - [`matching`]: generic one-to-one deferred acceptance with stability audit
//! - [`association`]: the two-phase decomposition producing a 3D association
//! - [`baselines`]: exhaustive, partial-exhaustive, greedy and random schemes
//! - [`experiments`]: scenario generation, seeded sweeps, CSV and SVG output
//! - [`config`]: declarative TOML experiment configuration

pub mod association;
pub mod baselines;
pub mod config;
pub mod error;
pub mod experiments;
pub mod matching;
pub mod propagation;
pub mod scenario;
pub mod sinr;

pub use error::{Error, Result};
