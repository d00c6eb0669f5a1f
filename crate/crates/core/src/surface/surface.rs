//! Triangulated piecewise smooth surfaces: faces with their own charts and
//! smooth metrics, edges glued between faces, vertices with angle wedges.

use alloc::string::String;
use alloc::vec::Vec;

use crate::calculus::{christoffel, curvature};
#[allow(unused_imports)]
use crate::float::FloatExt as _;
use crate::geometry::{Chart, MetricField};
use crate::linalg::VecN;
use crate::quadrature::gauss_on;
use crate::surface::region::Region2;
use crate::transport::Segment;
use crate::{GeoError, Result};

/// A face: a chart, a metric smooth up to the closed face, and the region
/// of the chart the face occupies.
pub struct Face {
    pub chart: Chart,
    pub metric: MetricField,
    pub region: Region2,
}

/// One side of an edge: the adjacent face and the edge arc drawn in that
/// face's chart. Both sides are parametrized consistently: equal parameters
/// name the same surface point.
#[derive(Clone, Debug)]
pub struct EdgeSide {
    pub face: usize,
    pub curve: Segment,
    /// Whether the face interior lies to the left of the directed curve.
    pub face_on_left: bool,
}

/// An edge between two faces (the same face may appear on both sides,
/// e.g. along a seam of an unrolled chart).
#[derive(Clone, Debug)]
pub struct Edge {
    pub sides: [EdgeSide; 2],
    /// Vertex ids at parameters 0 and 1, when the endpoints are vertices.
    pub endpoints: (Option<usize>, Option<usize>),
}

/// The corner a face contributes at a vertex: the position in the face
/// chart and the two boundary rays leaving the vertex.
#[derive(Clone, Debug)]
pub struct VertexWedge {
    pub face: usize,
    pub at: VecN,
    pub rays: [Segment; 2],
}

/// A vertex with all its incident face corners.
#[derive(Clone, Debug)]
pub struct Vertex {
    pub wedges: Vec<VertexWedge>,
}

/// A piecewise smooth surface.
pub struct PiecewiseSurface {
    pub name: String,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub faces: Vec<Face>,
    pub closed: bool,
}

/// Samples per edge for the glue-compatibility gate.
const GLUE_SAMPLES: usize = 50;
/// Tolerance on the induced length elements from the two sides.
const GLUE_TOL: f64 = 1e-8;
/// Radii for the vertex-angle extrapolation.
const ANGLE_RADII: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

impl PiecewiseSurface {
    /// Combinatorial Euler characteristic `V - E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Hard validation gate: glue compatibility of every edge, nonvanishing
    /// vertex angles, and positive-definite face metrics on a sample.
    pub fn validate(&self) -> Result<()> {
        for (i, edge) in self.edges.iter().enumerate() {
            let worst = self.glue_defect(edge)?;
            if worst > GLUE_TOL {
                return Err(GeoError::GlueMismatch { edge: i, worst });
            }
        }
        for (vi, v) in self.vertices.iter().enumerate() {
            for w in &v.wedges {
                let angle = self.wedge_angle(w)?;
                if angle.abs() < 1e-9 {
                    return Err(GeoError::ZeroVertexAngle { vertex: vi });
                }
            }
        }
        for face in &self.faces {
            let b = &face.chart.domain;
            for k in 0..5 {
                for l in 0..5 {
                    let p = VecN::new2(
                        b.lo(0) + b.extent(0) * (k as f64 + 0.5) / 5.0,
                        b.lo(1) + b.extent(1) * (l as f64 + 0.5) / 5.0,
                    );
                    if !face.region.contains(&p) {
                        continue;
                    }
                    let g = face.metric.eval(&p)?;
                    if g.cholesky().is_err() {
                        return Err(GeoError::NotPositiveDefinite);
                    }
                }
            }
        }
        Ok(())
    }

    /// Worst mismatch of the induced length elements along an edge.
    pub fn glue_defect(&self, edge: &Edge) -> Result<f64> {
        let mut worst = 0.0f64;
        for k in 0..GLUE_SAMPLES {
            let t = (k as f64 + 0.5) / GLUE_SAMPLES as f64;
            let mut lens = [0.0; 2];
            for (i, side) in edge.sides.iter().enumerate() {
                let p = side.curve.point(t);
                let v = side.curve.velocity(t);
                let g = self.faces[side.face].metric.eval(&p)?;
                lens[i] = g.quad(&v, &v).max(0.0).sqrt();
            }
            worst = worst.max((lens[0] - lens[1]).abs());
        }
        Ok(worst)
    }

    /// Interior angle of one wedge: the metric angle between the boundary
    /// tangents, with the metric sampled at shrinking radii from the vertex
    /// (where the metric may be undefined) and extrapolated to the vertex.
    pub fn wedge_angle(&self, w: &VertexWedge) -> Result<f64> {
        let face = &self.faces[w.face];
        let angles: Result<Vec<f64>> = ANGLE_RADII
            .iter()
            .map(|&r| wedge_angle_at_radius(face, w, r))
            .collect();
        let a = angles?;
        // one linear and one quadratic Richardson step
        let l1 = 2.0 * a[1] - a[0];
        let l2 = 2.0 * a[2] - a[1];
        Ok((4.0 * l2 - l1) / 3.0)
    }

    /// Angle defect `2 pi - sum of incident angles` at a vertex.
    pub fn vertex_defect(&self, v: usize) -> Result<f64> {
        let vert = &self.vertices[v];
        let mut total = 0.0;
        for w in &vert.wedges {
            let a = self.wedge_angle(w)?;
            if a.abs() < 1e-9 {
                return Err(GeoError::ZeroVertexAngle { vertex: v });
            }
            total += a;
        }
        Ok(core::f64::consts::TAU - total)
    }

    /// Signed geodesic curvature of a curve in a face metric, positive when
    /// the curve turns towards the left normal (chart orientation).
    pub fn geodesic_curvature(&self, face: usize, seg: &Segment, t: f64) -> Result<f64> {
        let metric = &self.faces[face].metric;
        let p = seg.point(t);
        let v = seg.velocity(t);
        let acc = seg.accel(t);
        let conn = christoffel(metric, &p)?;
        let a = acc.add(&conn.accel(&v, &v));
        let g = metric.eval(&p)?;
        let det = g.det().max(0.0).sqrt();
        let speed2 = g.quad(&v, &v);
        Ok(det * (v[0] * a[1] - v[1] * a[0]) / speed2.powf(1.5))
    }

    /// The one-dimensional curvature at an edge point: the sum over both
    /// sides of the geodesic curvature signed towards the respective face.
    pub fn edge_curvature(&self, edge: usize, t: f64) -> Result<f64> {
        let e = &self.edges[edge];
        let mut total = 0.0;
        for side in &e.sides {
            let k = self.geodesic_curvature(side.face, &side.curve, t)?;
            total += if side.face_on_left { k } else { -k };
        }
        Ok(total)
    }

    /// Length element of an edge at parameter `t` (the sides agree after
    /// validation; the first one is used).
    pub fn edge_speed(&self, edge: usize, t: f64) -> Result<f64> {
        let side = &self.edges[edge].sides[0];
        let p = side.curve.point(t);
        let v = side.curve.velocity(t);
        let g = self.faces[side.face].metric.eval(&p)?;
        Ok(g.quad(&v, &v).max(0.0).sqrt())
    }

    /// Integral of a function of (K1, arclength) along the spans of an edge.
    pub fn edge_integral(
        &self,
        edge: usize,
        spans: &[(f64, f64)],
        nodes: usize,
        mut f: impl FnMut(f64) -> f64,
    ) -> Result<f64> {
        let mut acc = 0.0;
        for &(a, b) in spans {
            let (ts, ws) = gauss_on(a, b, nodes);
            for (t, w) in ts.iter().zip(&ws) {
                let k1 = self.edge_curvature(edge, *t)?;
                let speed = self.edge_speed(edge, *t)?;
                acc += w * f(k1) * speed;
            }
        }
        Ok(acc)
    }

    /// Gaussian curvature of a face metric at a chart point.
    pub fn face_gaussian(&self, face: usize, p: &VecN) -> Result<f64> {
        let c = curvature(&self.faces[face].metric, p)?;
        Ok(c.gaussian.expect("faces are 2-dimensional"))
    }
}

/// Angle of a wedge with the metric sampled at chart radius `r` along the
/// first ray (falling back to the second when the field is undefined
/// there), against the fixed tangent directions at the vertex.
fn wedge_angle_at_radius(face: &Face, w: &VertexWedge, r: f64) -> Result<f64> {
    let metric = &face.metric;
    let p1 = ray_point_at_radius(&w.rays[0], &w.at, r);
    let g = match metric.eval(&p1.0) {
        Ok(g) => g,
        Err(GeoError::UndefinedAt { .. }) => {
            let p2 = ray_point_at_radius(&w.rays[1], &w.at, r);
            metric.eval(&p2.0)?
        }
        Err(e) => return Err(e),
    };
    let v1 = w.rays[0].velocity(0.0);
    let v2 = w.rays[1].velocity(0.0);
    let den = (g.quad(&v1, &v1) * g.quad(&v2, &v2)).max(0.0).sqrt();
    Ok((g.quad(&v1, &v2) / den).clamp(-1.0, 1.0).acos())
}

/// Parameter and point where a ray reaches chart distance `r` from `v`.
fn ray_point_at_radius(ray: &Segment, v: &VecN, r: f64) -> (VecN, f64) {
    let mut s = (r / ray.velocity(0.0).norm()).min(1.0);
    for _ in 0..40 {
        let d = ray.point(s).sub(v).norm();
        if (d - r).abs() < 1e-14 {
            break;
        }
        let dd = ray.velocity(s).norm();
        s = (s - (d - r) / dd).clamp(0.0, 1.0);
    }
    (ray.point(s), s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{BoxDomain, Regularity, UndefinedSet};
    use crate::linalg::MatN;

    fn flat_face(id: &str) -> Face {
        Face {
            chart: Chart::new(id, BoxDomain::square(-2.0, 2.0).unwrap()),
            metric: MetricField::new(
                Chart::new(id, BoxDomain::square(-2.0, 2.0).unwrap()),
                Regularity::Smooth,
                UndefinedSet::empty(),
                |_| Some(MatN::identity(2)),
            ),
            region: Region2::Rect(BoxDomain::square(0.0, 1.0).unwrap()),
        }
    }

    #[test]
    fn flat_corner_angle_is_right() {
        let face = flat_face("f");
        let w = VertexWedge {
            face: 0,
            at: VecN::new2(0.0, 0.0),
            rays: [
                Segment::Line { from: VecN::new2(0.0, 0.0), to: VecN::new2(1.0, 0.0) },
                Segment::Line { from: VecN::new2(0.0, 0.0), to: VecN::new2(0.0, 1.0) },
            ],
        };
        let s = PiecewiseSurface {
            name: "corner".into(),
            vertices: alloc::vec![Vertex { wedges: alloc::vec![w] }],
            edges: Vec::new(),
            faces: alloc::vec![face],
            closed: false,
        };
        let a = s.wedge_angle(&s.vertices[0].wedges[0]).unwrap();
        assert!((a - core::f64::consts::FRAC_PI_2).abs() < 1e-10, "{a}");
    }

    #[test]
    fn circle_geodesic_curvature_in_flat_metric() {
        let face = flat_face("f");
        let s = PiecewiseSurface {
            name: "c".into(),
            vertices: Vec::new(),
            edges: Vec::new(),
            faces: alloc::vec![face],
            closed: false,
        };
        // CCW unit circle: turning left at rate 1
        let seg = Segment::Arc {
            center: VecN::new2(0.0, 0.0),
            radius: 1.0,
            ang_from: 0.0,
            ang_to: core::f64::consts::TAU,
        };
        let k = s.geodesic_curvature(0, &seg, 0.3).unwrap();
        assert!((k - 1.0).abs() < 1e-9, "{k}");
        // CW circle: turning right
        let seg_cw = Segment::Arc {
            center: VecN::new2(0.0, 0.0),
            radius: 2.0,
            ang_from: core::f64::consts::TAU,
            ang_to: 0.0,
        };
        let k = s.geodesic_curvature(0, &seg_cw, 0.3).unwrap();
        assert!((k + 0.5).abs() < 1e-9, "{k}");
    }
}
