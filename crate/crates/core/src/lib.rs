//! Photon-pair detection with a Josephson photomultiplier.
//!
//! A storage resonator converts photon pairs into single buffer photons
//! through a two-photon coupler; the buffer feeds a driven Josephson
//! photomultiplier (JPM) whose escape into its deep well is the click.
//!
//! * [`circuit`] derives the resonator and coupler parameters.
//! * [`jpm`] solves the JPM spectrum and the rates that follow from it.
//! * [`lindblad`] integrates the open-system dynamics.
//! * [`metrics`] turns trajectories into fidelities, maps and optima.
//! * [`config`] holds the JSON schemas and built-in parameter sets.

// `!(x > 0.0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod circuit;
pub mod config;
pub mod error;
pub mod jpm;
pub mod lindblad;
pub mod metrics;
pub mod units;

mod numeric;

pub use error::{Error, Result};
