//! Parallel transport, geodesics, and distances: on smooth(ed) metrics and
//! in the vanishing-smoothing limit.

mod curve;
mod distance;
mod limit;
mod ode;

pub use curve::{CurveSpec, Segment};
pub use distance::{
    curve_length, distance_smoothed, length_limit, nonregular_distance, DistanceEstimate,
    DistanceParams, Verdict,
};
pub use limit::{edge_angle_drift, transport_limit, CrossingConfig, DriftReport, TransportLimit};
pub use ode::{
    geodesic_shoot, integrate_transport, integrate_transport_observed, GeodesicResult,
    OdeParams, TransportRun,
};
