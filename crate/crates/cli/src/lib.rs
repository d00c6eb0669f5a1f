//! Studies, reports, and file formats over `geomolt-core`.
//!
//! The binary front-end lives in `main.rs`; everything here is reusable so
//! the acceptance suite and the CLI share one implementation.

pub mod config;
pub mod formats;
pub mod report;
pub mod studies;
pub mod suite;
