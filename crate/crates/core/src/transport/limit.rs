//! Transport under the smoothed metric as the scale shrinks: limits and
//! edge-crossing diagnostics.

use alloc::vec::Vec;

#[allow(unused_imports)]
use crate::float::FloatExt as _;
use crate::geometry::{CoveringP, MetricField};
use crate::linalg::VecN;
use crate::mollifier::{smooth_wrt_p, SmoothParams};
use crate::transport::{integrate_transport_observed, CurveSpec, OdeParams};
use crate::{GeoError, Result};

/// Outcome of the vanishing-scale transport.
#[derive(Clone, Debug)]
pub struct TransportLimit {
    /// `(epsilon, transported vector)` per scale, on the first covering.
    pub per_eps: Vec<(f64, VecN)>,
    /// Transported vector at the finest scale on the second covering.
    pub cross_check: VecN,
    /// Difference between the last two scales on the first covering.
    pub tail_diff: f64,
    /// Difference between the two coverings at the finest scale.
    pub covering_diff: f64,
    /// True when both differences fall below the tolerance.
    pub converged: bool,
}

/// Integrate the transport under the covering-smoothed metric for every
/// scale and check that the limit is stable both in the scale and across
/// two independent coverings.
pub fn transport_limit(
    source: &MetricField,
    covering_a: &CoveringP,
    covering_b: &CoveringP,
    curve: &CurveSpec,
    v0: &VecN,
    epsilons: &[f64],
    tol: f64,
    ode: OdeParams,
    smooth: SmoothParams,
) -> Result<TransportLimit> {
    if epsilons.is_empty() {
        return Err(GeoError::EmptyEpsilonList);
    }
    if v0.norm() == 0.0 {
        // transport is linear; zero stays zero at every scale
        return Ok(TransportLimit {
            per_eps: epsilons.iter().map(|&e| (e, *v0)).collect(),
            cross_check: *v0,
            tail_diff: 0.0,
            covering_diff: 0.0,
            converged: true,
        });
    }
    let mut per_eps = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let metric = smooth_wrt_p(source, covering_a, eps, smooth)?;
        let run = crate::transport::integrate_transport(&metric, curve, v0, ode)?;
        per_eps.push((eps, *run.at_breakpoints.last().unwrap()));
    }
    let finest = *epsilons.last().unwrap();
    let metric_b = smooth_wrt_p(source, covering_b, finest, smooth)?;
    let run_b = crate::transport::integrate_transport(&metric_b, curve, v0, ode)?;
    let cross_check = *run_b.at_breakpoints.last().unwrap();

    let tail_diff = if per_eps.len() >= 2 {
        let a = per_eps[per_eps.len() - 2].1;
        let b = per_eps[per_eps.len() - 1].1;
        a.sub(&b).norm()
    } else {
        0.0
    };
    let covering_diff = per_eps.last().unwrap().1.sub(&cross_check).norm();
    Ok(TransportLimit {
        per_eps,
        cross_check,
        tail_diff,
        covering_diff,
        converged: tail_diff <= tol && covering_diff <= tol,
    })
}

/// An edge-crossing configuration for the drift diagnostic: the curve must
/// cross the (straight) edge transversally at the given parameter.
#[derive(Clone, Debug)]
pub struct CrossingConfig {
    pub curve: CurveSpec,
    /// Chart direction of the edge at the crossing.
    pub edge_dir: VecN,
    /// Curve parameter of the crossing.
    pub t_cross: f64,
    /// Half-width of the parameter window around the crossing.
    pub window: f64,
}

/// Drift of the angle between the carried vector and the edge direction
/// across a crossing, measured under the smoothed metric.
#[derive(Clone, Copy, Debug)]
pub struct DriftReport {
    pub epsilon: f64,
    /// Total variation of the angle cosine over the window.
    pub cos_variation: f64,
    /// |angle after - angle before| over the window, in radians.
    pub angle_change: f64,
}

/// Measure the angle drift across an edge crossing at one scale.
pub fn edge_angle_drift(
    source: &MetricField,
    covering: &CoveringP,
    config: &CrossingConfig,
    v0: &VecN,
    epsilon: f64,
    ode: OdeParams,
    smooth: SmoothParams,
) -> Result<DriftReport> {
    config.curve.validate()?;
    // transversality: curve velocity and edge direction must be independent
    let vel = config.curve.velocity(config.t_cross);
    let cross = vel[0] * config.edge_dir[1] - vel[1] * config.edge_dir[0];
    if cross.abs() < 1e-8 * vel.norm() * config.edge_dir.norm() {
        return Err(GeoError::TangentialCrossing);
    }

    let metric = smooth_wrt_p(source, covering, epsilon, smooth)?;
    let (t_lo, t_hi) = (config.t_cross - config.window, config.t_cross + config.window);
    let mut prev_cos: Option<f64> = None;
    let mut variation = 0.0;
    let mut first_angle = None;
    let mut last_angle = None;
    let edge = config.edge_dir;
    integrate_transport_observed(&metric, &config.curve, v0, ode, |t, x, _vel, v| {
        if t < t_lo || t > t_hi {
            return;
        }
        if let Ok(g) = metric_value(&metric, x) {
            let c = g.quad(&edge, v)
                / (g.quad(&edge, &edge).sqrt() * g.quad(v, v).sqrt()).max(1e-300);
            let c = c.clamp(-1.0, 1.0);
            if let Some(p) = prev_cos {
                variation += (c - p).abs();
            }
            prev_cos = Some(c);
            let a = c.acos();
            if first_angle.is_none() {
                first_angle = Some(a);
            }
            last_angle = Some(a);
        }
    })?;
    Ok(DriftReport {
        epsilon,
        cos_variation: variation,
        angle_change: match (first_angle, last_angle) {
            (Some(a), Some(b)) => (b - a).abs(),
            _ => 0.0,
        },
    })
}

fn metric_value(
    m: &crate::mollifier::SmoothedTensor,
    x: &VecN,
) -> Result<crate::linalg::MatN> {
    use crate::geometry::MetricSource as _;
    m.value(x)
}
