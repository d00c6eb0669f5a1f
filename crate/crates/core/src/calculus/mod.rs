//! Connections, curvature tensors, and Lipschitz-Killing curvature forms of
//! smooth (typically smoothed) metrics.

mod c2;
mod connection;
mod curvature;
mod lk;

pub use c2::{c2_convergence_check, C2Row};
pub use connection::{christoffel, ConnectionAt};
pub use curvature::{curvature, CurvatureAt};
pub use lk::{lk_density, lk_measure, LkParams};
