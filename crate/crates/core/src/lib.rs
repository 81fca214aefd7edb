//! Probe response of a four-level tripod atom with two transparency windows.
//!
//! The crate computes probe absorption and dispersion spectra two ways: from
//! the steady state of the Lindblad master equation ([`liouville`]) and from
//! closed-form weak-probe susceptibilities ([`analytic`]). [`spectra`] sweeps
//! either over the probe-coupling detuning and extracts transparency windows;
//! [`model`] holds parameter records and the figure presets; [`output`] writes
//! CSV, JSON and SVG artifacts.
//!
//! All frequencies and rates are in units of the spontaneous emission rate.

// `!(x > 0.0)` is how parameter checks reject NaN along with the range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod config;
pub mod error;
pub mod hamiltonian;
pub mod linalg;
pub mod liouville;
pub mod model;
pub mod output;
pub mod spectra;
pub mod units;

pub use error::{Error, Result};
pub use liouville::Relaxation;
pub use model::{Evaluator, Figure, LambdaParams, ScanAxis, Sweep, TripodParams};
pub use num_complex::Complex64;

/// Version tag embedded in generated artifacts.
pub const VERSION: &str = concat!("deit ", env!("CARGO_PKG_VERSION"));
