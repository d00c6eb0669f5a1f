//! Error type shared across the crate.

use alloc::string::String;
use core::fmt;

/// Everything that can go wrong while building or evaluating the geometry.
#[derive(Debug, Clone, PartialEq)]
pub enum GeoError {
    /// A chart or region box has zero or negative extent.
    EmptyDomain,
    /// Covering parameters violate `0 < overlap < cell_size`.
    BadCoveringParams { cell_size: f64, overlap: f64 },
    /// A point lies outside the chart it was evaluated in.
    OutsideChart,
    /// A field was evaluated on its declared undefined set.
    UndefinedAt { x: f64, y: f64 },
    /// A metric matrix failed the positive-definiteness check.
    NotPositiveDefinite,
    /// Linear solve hit an (effectively) singular matrix.
    SingularMetric { condition: f64 },
    /// Smoothing scale exceeds the bound allowed by the region/background.
    EpsilonTooLarge { epsilon: f64, bound: f64 },
    /// Non-positive smoothing scale.
    BadEpsilon,
    /// Lipschitz-Killing degree outside `[0, n]`.
    KappaOutOfRange { kappa: usize, dim: usize },
    /// Kernel derivative order above 2 requested.
    DerivativeOrderTooHigh { order: usize },
    /// `p < 1` passed to an `L^p` norm.
    BadExponent { p: f64 },
    /// Integration region not contained in the chart.
    RegionOutsideChart,
    /// A frame with linearly dependent columns.
    DegenerateFrame,
    /// Curve touches a vertex it must avoid.
    CurveTouchesVertex,
    /// Curve meets an edge tangentially where a transversal crossing is required.
    TangentialCrossing,
    /// Curve segment has a vanishing velocity sample.
    IrregularCurve,
    /// Grid graph is disconnected between the requested endpoints.
    DisconnectedRegion,
    /// Surface operation needs a closed surface but the surface has boundary.
    BoundaryPresent,
    /// Edge length elements induced from the two adjacent faces disagree.
    GlueMismatch { edge: usize, worst: f64 },
    /// An incident angle at a vertex is (numerically) zero.
    ZeroVertexAngle { vertex: usize },
    /// Admissible-set condition violated.
    InadmissibleSet(String),
    /// Named example is not registered.
    UnknownExample { name: String, available: String },
    /// Backgrounds other than the registered ones need an explicit bound.
    NoInjectivityBound,
    /// Empty epsilon list passed to a sweep.
    EmptyEpsilonList,
    /// Requested feature has no attached local smoothing model.
    NoLocalModel,
    /// Catch-all for invalid arguments.
    Invalid(String),
}

impl fmt::Display for GeoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeoError::EmptyDomain => write!(f, "domain box is empty"),
            GeoError::BadCoveringParams { cell_size, overlap } => write!(
                f,
                "covering needs 0 < overlap < cell_size, got cell_size={cell_size}, overlap={overlap}"
            ),
            GeoError::OutsideChart => write!(f, "point lies outside the chart domain"),
            GeoError::UndefinedAt { x, y } => {
                write!(f, "field is undefined at ({x}, {y})")
            }
            GeoError::NotPositiveDefinite => write!(f, "matrix is not positive definite"),
            GeoError::SingularMetric { condition } => {
                write!(f, "metric matrix is singular (condition number {condition:.3e})")
            }
            GeoError::EpsilonTooLarge { epsilon, bound } => {
                write!(f, "epsilon {epsilon} exceeds the allowed bound {bound}")
            }
            GeoError::BadEpsilon => write!(f, "epsilon must be positive"),
            GeoError::KappaOutOfRange { kappa, dim } => {
                write!(f, "kappa = {kappa} outside [0, {dim}]")
            }
            GeoError::DerivativeOrderTooHigh { order } => {
                write!(f, "kernel derivatives available up to order 2, got {order}")
            }
            GeoError::BadExponent { p } => write!(f, "L^p norm needs p >= 1, got {p}"),
            GeoError::RegionOutsideChart => write!(f, "region is not contained in the chart"),
            GeoError::DegenerateFrame => write!(f, "frame columns are linearly dependent"),
            GeoError::CurveTouchesVertex => write!(f, "curve passes through a vertex"),
            GeoError::TangentialCrossing => write!(f, "curve crosses an edge tangentially"),
            GeoError::IrregularCurve => write!(f, "curve segment has vanishing velocity"),
            GeoError::DisconnectedRegion => write!(f, "endpoints are not connected on the grid"),
            GeoError::BoundaryPresent => write!(f, "operation requires a closed surface"),
            GeoError::GlueMismatch { edge, worst } => write!(
                f,
                "edge {edge}: induced length elements from the two faces differ by {worst:.3e}"
            ),
            GeoError::ZeroVertexAngle { vertex } => {
                write!(f, "vertex {vertex} has a zero incident angle")
            }
            GeoError::InadmissibleSet(why) => write!(f, "set not admissible: {why}"),
            GeoError::UnknownExample { name, available } => {
                write!(f, "unknown example '{name}'; registered: {available}")
            }
            GeoError::NoInjectivityBound => write!(
                f,
                "background has no closed-form injectivity bound; pass one explicitly"
            ),
            GeoError::EmptyEpsilonList => write!(f, "epsilon list must be nonempty"),
            GeoError::NoLocalModel => {
                write!(f, "no local smoothing model attached to this feature")
            }
            GeoError::Invalid(why) => write!(f, "{why}"),
        }
    }
}

impl core::error::Error for GeoError {}
