//! Chart boxes, tensor fields, coverings with partitions of unity, frames,
//! and numerical tensor norms.

mod chart;
mod covering;
mod field;
mod frame;
mod norms;

pub use chart::{BoxDomain, Chart};
pub use covering::{build_covering, build_covering_with_margin, CoveringChart, CoveringP};
pub use field::{
    ConstField, DiffField, Jet, MetricField, MetricSource, Regularity, SymField, UndefinedSet,
};
pub use frame::orthonormalize;
pub use norms::{c0_norm, lp_norm, pointwise_opnorm, NormParams};
