//! Adaptive distributed transmit beamforming as local random search.
//!
//! A network of transmitters adjusts its phases using one bit of feedback per
//! slot: each slot every (or, asynchronously, some) transmitter adds a small
//! random phase offset, the receiver reports whether the received SNR went up,
//! and the offsets are kept only if it did. The crate provides
//!
//! * [`model`]: channels, the SNR and modulo-π objectives, perturbation
//!   measures and update schedules,
//! * [`search`]: the perturb/accept iteration and its traces,
//! * [`experiments`]: a seeded Monte Carlo harness for convergence,
//!   asynchrony and scaling studies,
//! * [`cli`]: config parsing and result files for the `beamsearch` binary.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod model;
pub mod rng;
pub mod search;

pub use error::{Error, Result};
