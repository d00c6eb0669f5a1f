//! Gauss-Bonnet identities on piecewise smooth surfaces: the closed-surface
//! total and the boundary identity for admissible open sets.

use alloc::vec::Vec;

#[allow(unused_imports)]
use crate::float::FloatExt as _;
use crate::quadrature::gauss_on;
use crate::surface::measure::{measure_on_open, measure_on_open_exact, MeasureParams};
use crate::surface::region::SurfaceRegion;
use crate::surface::surface::PiecewiseSurface;
use crate::transport::Segment;
use crate::{GeoError, Result};

/// Total curvature of a closed surface and its residual against
/// `2 pi chi(M)`.
pub fn gauss_bonnet_closed(
    surface: &PiecewiseSurface,
    params: MeasureParams,
) -> Result<(f64, f64)> {
    if !surface.closed {
        return Err(GeoError::BoundaryPresent);
    }
    let everything = SurfaceRegion::everything(surface.edges.len(), surface.faces.len());
    let total = measure_on_open(surface, &everything, params)?.total();
    let residual = total - core::f64::consts::TAU * surface.euler_characteristic() as f64;
    Ok((total, residual))
}

/// An open set with piecewise smooth boundary, suitable for the boundary
/// identity: boundary pieces are oriented with the set on their left,
/// consecutive pieces meet at corners, and the boundary avoids vertices
/// and crosses edges transversally.
pub struct AdmissibleOpenSet {
    /// Interior strata for the curvature terms.
    pub interior: SurfaceRegion,
    /// Euler characteristic of the closure.
    pub chi: i64,
    /// Smooth boundary pieces, cyclically ordered.
    pub boundary: Vec<BoundaryPiece>,
}

pub struct BoundaryPiece {
    pub face: usize,
    pub seg: Segment,
}

/// Number of boundary samples for the admissibility probe.
const BOUNDARY_PROBE: usize = 720;

impl AdmissibleOpenSet {
    /// Reject boundaries that touch a vertex or run tangent to an edge.
    pub fn check_admissible(&self, surface: &PiecewiseSurface) -> Result<()> {
        for piece in &self.boundary {
            for k in 0..BOUNDARY_PROBE / self.boundary.len().max(1) {
                let t = (k as f64 + 0.5) / (BOUNDARY_PROBE / self.boundary.len().max(1)) as f64;
                let p = piece.seg.point(t);
                for v in &surface.vertices {
                    for w in &v.wedges {
                        if w.face == piece.face && w.at.sub(&p).norm() < 1e-6 {
                            return Err(GeoError::InadmissibleSet(alloc::string::String::from(
                                "boundary touches a vertex",
                            )));
                        }
                    }
                }
                // tangential edge contact: a boundary point on an edge arc
                // must cross it transversally
                for e in &surface.edges {
                    for side in &e.sides {
                        if side.face != piece.face {
                            continue;
                        }
                        // distance from p to the edge curve (coarse scan)
                        let mut best_t = 0.0;
                        let mut best = f64::INFINITY;
                        for j in 0..=20 {
                            let s = j as f64 / 20.0;
                            let d = side.curve.point(s).sub(&p).norm();
                            if d < best {
                                best = d;
                                best_t = s;
                            }
                        }
                        if best < 1e-7 {
                            let ve = side.curve.velocity(best_t);
                            let vb = piece.seg.velocity(t);
                            let cross = ve[0] * vb[1] - ve[1] * vb[0];
                            if cross.abs() < 1e-8 * ve.norm() * vb.norm() {
                                return Err(GeoError::TangentialCrossing);
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// External angles at the corners between consecutive boundary pieces,
    /// measured in the face metric; rejects straight angles.
    pub fn external_angles(&self, surface: &PiecewiseSurface) -> Result<Vec<f64>> {
        let n = self.boundary.len();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let cur = &self.boundary[i];
            let next = &self.boundary[(i + 1) % n];
            let p_end = cur.seg.point(1.0);
            let p_start = next.seg.point(0.0);
            if p_end.sub(&p_start).norm() > 1e-9 {
                // pieces meet across an edge crossing, not at a corner
                continue;
            }
            if cur.face != next.face {
                continue;
            }
            let g = surface.faces[cur.face].metric.eval(&p_end)?;
            let u = cur.seg.velocity(1.0);
            let w = next.seg.velocity(0.0);
            let den = (g.quad(&u, &u) * g.quad(&w, &w)).max(0.0).sqrt();
            let cosang = (g.quad(&u, &w) / den).clamp(-1.0, 1.0);
            let sinang = g.det().max(0.0).sqrt() * (u[0] * w[1] - u[1] * w[0]) / den;
            let angle = sinang.atan2(cosang);
            if angle.abs() > core::f64::consts::PI - 1e-6 {
                return Err(GeoError::InadmissibleSet(alloc::string::String::from(
                    "straight-angle (cusp) corner on the boundary",
                )));
            }
            if angle.abs() > 1e-12 {
                out.push(angle);
            }
        }
        Ok(out)
    }

    /// Integral of the geodesic curvature of the boundary (signed towards
    /// the enclosed set, which lies on the left of each piece).
    pub fn boundary_turning(
        &self,
        surface: &PiecewiseSurface,
        nodes: usize,
    ) -> Result<f64> {
        let mut acc = 0.0;
        for piece in &self.boundary {
            let (ts, ws) = gauss_on(0.0, 1.0, nodes);
            for (t, w) in ts.iter().zip(&ws) {
                let k = surface.geodesic_curvature(piece.face, &piece.seg, *t)?;
                let g = surface.faces[piece.face].metric.eval(&piece.seg.point(*t))?;
                let v = piece.seg.velocity(*t);
                let speed = g.quad(&v, &v).max(0.0).sqrt();
                acc += w * k * speed;
            }
        }
        Ok(acc)
    }
}

/// Residual of the boundary identity: `sum of external angles + boundary
/// turning - (2 pi chi - interior curvature terms)`; zero for admissible
/// sets up to quadrature error.
pub fn gauss_bonnet_open(
    surface: &PiecewiseSurface,
    set: &AdmissibleOpenSet,
    params: MeasureParams,
) -> Result<f64> {
    set.check_admissible(surface)?;
    let angles: f64 = set.external_angles(surface)?.iter().sum();
    let turning = set.boundary_turning(surface, params.edge_nodes)?;
    let interior = measure_on_open_exact(surface, &set.interior, params)?.total();
    let rhs = core::f64::consts::TAU * set.chi as f64 - interior;
    Ok(angles + turning - rhs)
}
