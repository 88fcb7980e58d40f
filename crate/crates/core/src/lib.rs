//! Street-corner vehicular visible-light MIMO channel model.
//!
//! Two vehicles approach a street corner bounded by two building walls.
//! Light from the transmitter headlamp array reaches the receiver
//! photodiode array only through single bounces off wall scatterers or
//! off moving scatterers (pedestrians, other vehicles). This crate builds
//! tap-form channel impulse responses from closed-form geometry and
//! Lambertian radiometry, evolves them as the scene moves, and reduces
//! them to gain and delay-spread statistics.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI,
//! and parallel Monte Carlo drivers live in the `vvlc` companion crate.
#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is deliberate: it rejects NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cir;
mod error;
pub mod geometry;
pub mod math;
pub mod metrics;
pub mod optics;
pub mod scatter;
pub mod scene;

pub use error::{Error, ErrorCategory, Result};
pub use math::Vec2;

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
