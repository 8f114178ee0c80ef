//! Energy-optimal split learning over a LEO orbital ring.
//!
//! A ground terminal trains a model jointly with whichever satellite of an
//! orbital ring is currently overhead: the front part of the network runs on
//! the satellite, the back part on the ground, and activations/gradients cross
//! the radio link. When the pass ends, the satellite hands its model half to
//! the successor over an inter-satellite link. This crate models the physics
//! of that loop and solves the per-pass energy minimization:
//!
//! * [`orbit`] — pass geometry of a circular ring: orbital period, slant
//!   range, pass duration, ISL distance, pass-averaged range.
//! * [`compute`] — DVFS processing model (cubic power law, energy quadratic
//!   in clock frequency at fixed work).
//! * [`link`] — Shannon-rate radio links with free-space path loss, plus the
//!   fixed-rate ISL transfer.
//! * [`optimizer`] — minimizes total pass energy over processor frequencies
//!   and transmit powers subject to the pass-duration deadline, with a
//!   brute-force grid oracle for verification, the direct-download baseline,
//!   and split-point sweeps.
//! * [`scenario`] — TOML scenario configs, unit normalization, and built-in
//!   presets (autoencoder compression, ResNet-18 classification splits).
//! * [`report`] / [`cli`] — deterministic JSON/CSV reports and the command
//!   layer behind the `leosplit` binary.
//!
//! Every model quantity is SI internally (meters, seconds, radians, watts,
//! bits). See the crate examples for one runnable program per capability.

pub mod cli;
pub mod compute;
pub mod error;
pub mod link;
pub mod optimizer;
pub mod orbit;
pub mod report;
pub mod scenario;
pub mod units;

pub use error::{Error, Result};
