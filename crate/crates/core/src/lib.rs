//! Smoothing toolkit for non-regular Riemannian metrics on chart domains.
//!
//! A metric that is merely continuous, locally `L^p`, or defined only away
//! from a null set cannot be differentiated directly. This crate replaces it
//! with a one-parameter family of smooth metrics obtained by intrinsic
//! mollification, and computes the downstream geometry of the smoothed
//! family: Christoffel symbols, curvature tensors, Lipschitz-Killing
//! densities, parallel transport, geodesics, shortest-path distances, and
//! curvature measures of piecewise smooth surfaces. Limits as the smoothing
//! scale shrinks recover (or fail to recover, measurably) the geometry of
//! the original metric.
//!
//! The crate is `no_std`-compatible (`default-features = false,
//! features = ["libm"]`); everything that touches files, CLIs, or threads
//! lives in the companion `geomolt` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("geomolt-core requires either the `std` or the `libm` feature");

pub mod calculus;
pub mod cantor;
pub mod error;
pub mod examples;
pub mod geometry;
mod float;
pub mod linalg;
pub mod mollifier;
pub mod quadrature;
pub mod surface;
pub mod transport;

pub use error::GeoError;

/// Crate-wide result type.
pub type Result<T> = core::result::Result<T, GeoError>;
