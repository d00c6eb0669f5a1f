//! Piecewise smooth surfaces: triangulated 2-manifolds with smooth face
//! metrics, their curvature measures, and Gauss-Bonnet identities.

mod gauss_bonnet;
mod measure;
mod region;
mod smoothing;
#[allow(clippy::module_inception)]
mod surface;

pub use gauss_bonnet::{gauss_bonnet_closed, gauss_bonnet_open, AdmissibleOpenSet, BoundaryPiece};
pub use measure::{
    ball_around_vertex, complement_of_vertex, exact_face_integral, face_area, face_box,
    face_integral, face_rule, generator_axioms_check, measure_on_open, measure_on_open_exact,
    vertex_singleton, AxiomsReport, MeasureParams, MeasureValue,
};
pub use region::{EdgeSel, Region2, SurfaceRegion, VertexSel};
pub use smoothing::{
    cone_model, crease_model, final_relative_error, measure_smoothing_convergence,
    smoothed_curvature_integral, FeatureGeometry, LocalModel, SmoothedMeasureTable,
};
pub use surface::{Edge, EdgeSide, Face, PiecewiseSurface, Vertex, VertexWedge};
