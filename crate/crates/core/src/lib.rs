//! Exact analysis of prediction value versus action value for planner models
//! with binary latent states, a Boolean outcome, Boolean measurements and
//! single-state do-operation actions.
//!
//! The crate is organised bottom-up:
//!
//! - [`boolmodel`]: assignments, distributions, truth tables, actions, costs.
//! - [`value`]: optimal predictors and policies, a brute-force policy oracle,
//!   and the closed forms of the two-state model.
//! - [`theory`]: pivotal measurements, sufficiency checks and the measurement
//!   constructions that beat the outcome as a measurement.
//! - [`search`]: ranking candidates and exhaustive measurement-set search.
//! - [`scenario`]: the scenario file format, CSV sweeps and text reports.
//! - [`verify`]: the theorem checks run by `vact verify`.

pub mod boolmodel;
mod error;
pub mod random;
pub mod scenario;
pub mod search;
pub mod sweep;
pub mod theory;
pub mod value;
pub mod verify;

pub use error::{Error, Result};

/// Capacity guard on the number of latent states.
pub const MAX_STATES: usize = 12;
