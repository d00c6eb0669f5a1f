//! Local smoothing models: non-regular chart metrics isometric to a
//! neighborhood of a surface feature (a vertex cone, an edge crease), used
//! to measure the convergence of smoothed curvature to the combinatorial
//! curvature measure.

use alloc::vec::Vec;

use crate::calculus::curvature;
#[allow(unused_imports)]
use crate::float::FloatExt as _;
use crate::geometry::{build_covering_with_margin, BoxDomain, MetricField};
use crate::linalg::VecN;
use crate::mollifier::{smooth_wrt_p, SmoothParams};
use crate::quadrature::gauss_on;
use crate::surface::region::Region2;
use crate::{GeoError, Result};

/// Geometry of the non-smooth locus inside a local chart, used to split
/// quadrature intervals where the integrand kinks.
#[derive(Clone, Copy, Debug)]
pub enum FeatureGeometry {
    /// Curvature concentrates at a point (a cone tip).
    PointAt(VecN),
    /// Curvature concentrates along the axis-aligned line `x_axis = value`.
    LineAt { axis: usize, value: f64 },
}

/// A local chart model of a surface feature.
pub struct LocalModel {
    /// The non-regular metric in the local chart.
    pub field: MetricField,
    pub geometry: FeatureGeometry,
    /// Curvature measure the feature carries per unit (total for a point,
    /// per unit arclength for a line).
    pub expected_density: f64,
}

/// Sweep of the smoothed curvature integral over a region of the local
/// chart.
#[derive(Clone, Debug)]
pub struct SmoothedMeasureTable {
    pub rows: Vec<(f64, f64)>,
    /// The combinatorial measure the rows should approach.
    pub expected: f64,
}

/// Integrate the smoothed Gaussian curvature (with the smoothed area
/// element) over `region` for each scale.
pub fn measure_smoothing_convergence(
    model: &LocalModel,
    region: &Region2,
    epsilons: &[f64],
    covering_cell: f64,
    params: SmoothParams,
    expected: f64,
) -> Result<SmoothedMeasureTable> {
    if epsilons.is_empty() {
        return Err(GeoError::EmptyEpsilonList);
    }
    let mut rows = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let value = smoothed_curvature_integral(model, region, eps, covering_cell, params)?;
        rows.push((eps, value));
    }
    Ok(SmoothedMeasureTable { rows, expected })
}

/// One scale of the sweep.
pub fn smoothed_curvature_integral(
    model: &LocalModel,
    region: &Region2,
    eps: f64,
    covering_cell: f64,
    params: SmoothParams,
) -> Result<f64> {
    // covering of a box holding the region, compactly inside the chart
    let chart = &model.field.chart.domain;
    let margin = 1.05 * eps + 0.02;
    let dom = region_bounds(region)?;
    let dom = dom.intersect(&chart.fattened(-(margin + 1e-9))).ok_or(GeoError::EmptyDomain)?;
    // overlap must stay below half the realized cell width on every axis
    let mut min_width = f64::INFINITY;
    for k in 0..dom.dim() {
        let c = (dom.extent(k) / covering_cell).ceil().max(1.0);
        min_width = min_width.min(dom.extent(k) / c);
    }
    let covering =
        build_covering_with_margin(&dom, covering_cell, 0.4 * min_width, margin)?;
    let smoothed = smooth_wrt_p(&model.field, &covering, eps, params)?;

    let integrand = |x: &VecN| -> Result<f64> {
        let c = curvature(&smoothed, x)?;
        let det = c.metric.det().max(0.0);
        Ok(c.gaussian.expect("2d") * det.sqrt())
    };

    match (region, model.geometry) {
        (Region2::Disk { center, radius }, FeatureGeometry::PointAt(p))
            if p.sub(center).norm() < 1e-12 =>
        {
            // polar rule around the tip, radially split at the smoothing
            // scale where the integrand is concentrated
            let split = (3.0 * eps).min(0.8 * radius);
            let mut total = 0.0;
            for (a, b, n) in [(1e-9, split, 40), (split, *radius, 28)] {
                let (rs, wr) = gauss_on(a, b, n);
                let na = 32;
                let wphi = core::f64::consts::TAU / na as f64;
                for (r, w) in rs.iter().zip(&wr) {
                    for k in 0..na {
                        let phi = (k as f64 + 0.5) * wphi;
                        let (s, c) = phi.sin_cos();
                        let mut x = *center;
                        x[0] += r * c;
                        x[1] += r * s;
                        total += w * r * wphi * integrand(&x)?;
                    }
                }
            }
            Ok(total)
        }
        (Region2::Rect(b), geom) => {
            // product rule; split the axis crossing a crease line
            let mut xs: Vec<(f64, f64)> = Vec::new();
            let mut ys: Vec<(f64, f64)> = Vec::new();
            let fill = |lo: f64, hi: f64, split_at: Option<f64>, out: &mut Vec<(f64, f64)>| {
                let segs: Vec<(f64, f64)> = match split_at {
                    Some(s) if s - 3.0 * eps > lo && s + 3.0 * eps < hi => alloc::vec![
                        (lo, s - 3.0 * eps),
                        (s - 3.0 * eps, s + 3.0 * eps),
                        (s + 3.0 * eps, hi)
                    ],
                    _ => alloc::vec![(lo, hi)],
                };
                for (a, b) in segs {
                    let (t, w) = gauss_on(a, b, 24);
                    out.extend(t.into_iter().zip(w));
                }
            };
            let (sx, sy) = match geom {
                FeatureGeometry::LineAt { axis: 0, value } => (Some(value), None),
                FeatureGeometry::LineAt { axis: _, value } => (None, Some(value)),
                FeatureGeometry::PointAt(p) => (Some(p[0]), Some(p[1])),
            };
            fill(b.lo(0), b.hi(0), sx, &mut xs);
            fill(b.lo(1), b.hi(1), sy, &mut ys);
            let mut total = 0.0;
            for (x, wx) in &xs {
                for (y, wy) in &ys {
                    total += wx * wy * integrand(&VecN::new2(*x, *y))?;
                }
            }
            Ok(total)
        }
        _ => Err(GeoError::InadmissibleSet(alloc::string::String::from(
            "smoothing integration supports disks centered on the feature and boxes",
        ))),
    }
}

fn region_bounds(region: &Region2) -> Result<BoxDomain> {
    match region {
        Region2::Rect(b) => Ok(*b),
        Region2::Disk { center, radius } => BoxDomain::new(
            &[center[0] - radius, center[1] - radius],
            &[center[0] + radius, center[1] + radius],
        ),
        _ => Err(GeoError::InadmissibleSet(alloc::string::String::from(
            "region has no simple bounding box",
        ))),
    }
}

/// The flat cone of total angle `2 pi alpha` in conformal coordinates:
/// `g = r^(2 (alpha - 1)) * I`, singular at the tip, flat elsewhere, with
/// angle defect `2 pi (1 - alpha)` concentrated at the tip.
pub fn cone_model(alpha: f64, chart_half_width: f64) -> Result<LocalModel> {
    use crate::geometry::{Chart, Regularity, UndefinedSet};
    use crate::linalg::MatN;
    let p = 2.0 * (alpha - 1.0);
    let chart = Chart::new(
        "cone",
        BoxDomain::square(-chart_half_width, chart_half_width)?,
    );
    let field = MetricField::new(
        chart,
        Regularity::LpLoc(1.5),
        UndefinedSet::point(VecN::new2(0.0, 0.0)),
        move |x| {
            let r2 = x[0] * x[0] + x[1] * x[1];
            if r2 == 0.0 {
                None
            } else {
                Some(MatN::identity(2).scale(r2.powf(0.5 * p)))
            }
        },
    );
    Ok(LocalModel {
        field,
        geometry: FeatureGeometry::PointAt(VecN::new2(0.0, 0.0)),
        expected_density: core::f64::consts::TAU * (1.0 - alpha),
    })
}

/// The crease where a flat unit-radius disk cap meets a cylinder side,
/// unrolled: coordinates `(s, u)` with the rim at `u = 0`, metric
/// `diag((1+u)^2, 1)` on the cap side (`u < 0`) and flat on the side
/// (`u > 0`). Carries curvature density 1 per unit rim length.
pub fn crease_model(chart: (f64, f64)) -> Result<LocalModel> {
    use crate::geometry::{Chart, Regularity, UndefinedSet};
    use crate::linalg::MatN;
    let c = Chart::new(
        "crease",
        BoxDomain::new(&[-chart.0, -chart.1], &[chart.0, chart.1])?,
    );
    let field = MetricField::new(c, Regularity::C0, UndefinedSet::empty(), |x| {
        let u = x[1];
        let gss = if u < 0.0 { (1.0 + u) * (1.0 + u) } else { 1.0 };
        Some(MatN::diag(&[gss, 1.0]))
    })
    .with_kink_distance(|x| x[1].abs());
    Ok(LocalModel {
        field,
        geometry: FeatureGeometry::LineAt { axis: 1, value: 0.0 },
        expected_density: 1.0,
    })
}

/// Convergence of a smoothed-measure sweep: the last row must land within
/// `rtol` of the expected value.
pub fn final_relative_error(table: &SmoothedMeasureTable) -> f64 {
    let last = table.rows.last().map(|r| r.1).unwrap_or(f64::NAN);
    ((last - table.expected) / table.expected).abs()
}
