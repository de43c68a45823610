//! Echo state networks with linear, tanh and product (multiplicative)
//! reservoirs.
//!
//! The crate is organised bottom-up:
//!
//! - [`reservoir`]: weight generation, spectral-radius rescaling, additive and
//!   product dynamics, the closed-form product state and the echo-state probe.
//! - [`readout`]: least-squares readout training via the pseudo-inverse.
//! - [`tasks`]: uniform inputs, delay and Legendre targets, Mackey-Glass and
//!   Lorenz generators, unit rescaling and prediction datasets.
//! - [`metrics`]: capacity, NMSE and their totals.
//! - [`harness`]: configuration-driven sweeps over input scale and spectral
//!   radius, with deterministic per-cell seeds and CSV/JSON output.
//! - [`cli`]: the `prodres` command built on the harness.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod cli;
pub mod error;
pub mod format;
pub mod harness;
pub mod metrics;
pub mod readout;
pub mod reservoir;
pub mod scalar;
pub mod tasks;

pub use error::{Error, Result};
pub use scalar::{Mode, Scalar};

/// Lower clamp applied to inputs before a product reservoir takes their logarithm.
pub const DEFAULT_EPSILON: f64 = 1e-6;
