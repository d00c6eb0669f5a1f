//! Fixed-step RK4 integration of the transport and geodesic equations.

use alloc::vec::Vec;

use crate::calculus::christoffel;
#[allow(unused_imports)]
use crate::float::FloatExt as _;
use crate::geometry::MetricSource;
use crate::linalg::VecN;
use crate::transport::CurveSpec;
use crate::{GeoError, Result};

/// Integration resolution.
#[derive(Clone, Copy, Debug)]
pub struct OdeParams {
    /// RK4 steps per unit of curve parameter (or of arclength for shooting).
    pub steps_per_unit: usize,
}

impl Default for OdeParams {
    fn default() -> Self {
        OdeParams { steps_per_unit: 2000 }
    }
}

/// Result of transporting a vector along a curve.
#[derive(Clone, Debug)]
pub struct TransportRun {
    /// Transported vector at every breakpoint (including both endpoints).
    pub at_breakpoints: Vec<VecN>,
    /// Largest relative drift of the metric norm of the carried vector.
    pub norm_drift: f64,
}

/// Solve `dv_l/dt = - sum_ij Gamma^l_ij xdot_i v_j` along the curve.
///
/// `observe` is called after every accepted step with
/// `(t, position, curve velocity, carried vector)`.
pub fn integrate_transport_observed(
    metric: &dyn MetricSource,
    curve: &CurveSpec,
    v0: &VecN,
    params: OdeParams,
    mut observe: impl FnMut(f64, &VecN, &VecN, &VecN),
) -> Result<TransportRun> {
    curve.validate()?;
    let mut v = *v0;
    let mut at_breakpoints = Vec::with_capacity(curve.breakpoints.len());
    at_breakpoints.push(v);

    let g0 = metric.value(&curve.point(curve.t_start()))?;
    let norm0 = g0.quad(v0, v0).max(0.0).sqrt();
    let mut drift = 0.0f64;

    for i in 0..curve.segments.len() {
        let (a, b) = (curve.breakpoints[i], curve.breakpoints[i + 1]);
        let steps = (((b - a) * params.steps_per_unit as f64).ceil() as usize).max(2);
        let h = (b - a) / steps as f64;
        let rhs = |t: f64, v: &VecN| -> Result<VecN> {
            let x = curve.point(t);
            let xdot = curve.velocity(t);
            let conn = christoffel(metric, &x)?;
            Ok(conn.accel(&xdot, v).scale(-1.0))
        };
        let mut t = a;
        for _ in 0..steps {
            let k1 = rhs(t, &v)?;
            let k2 = rhs(t + 0.5 * h, &v.axpy(0.5 * h, &k1))?;
            let k3 = rhs(t + 0.5 * h, &v.axpy(0.5 * h, &k2))?;
            let k4 = rhs(t + h, &v.axpy(h, &k3))?;
            v = v.axpy(h / 6.0, &k1.add(&k2.scale(2.0)).add(&k3.scale(2.0)).add(&k4));
            t += h;
            let x = curve.point(t);
            observe(t, &x, &curve.velocity(t), &v);
            if norm0 > 0.0 {
                let g = metric.value(&x)?;
                let norm = g.quad(&v, &v).max(0.0).sqrt();
                drift = drift.max((norm - norm0).abs() / norm0);
            }
        }
        at_breakpoints.push(v);
    }
    Ok(TransportRun { at_breakpoints, norm_drift: drift })
}

/// Parallel transport of `v0` along the curve; see
/// [`integrate_transport_observed`].
pub fn integrate_transport(
    metric: &dyn MetricSource,
    curve: &CurveSpec,
    v0: &VecN,
    params: OdeParams,
) -> Result<TransportRun> {
    integrate_transport_observed(metric, curve, v0, params, |_, _, _, _| {})
}

/// Result of shooting a geodesic.
#[derive(Clone, Debug)]
pub struct GeodesicResult {
    pub endpoint: VecN,
    pub end_velocity: VecN,
    /// Largest relative drift of the metric speed along the run.
    pub speed_drift: f64,
    /// Arclength actually covered; less than requested when the geodesic
    /// left the chart, in which case `exited = true`.
    pub length_reached: f64,
    pub exited: bool,
}

/// Shoot the geodesic from `x` in direction `v` (normalized to unit metric
/// speed) for the given arclength.
pub fn geodesic_shoot(
    metric: &dyn MetricSource,
    x: &VecN,
    v: &VecN,
    length: f64,
    params: OdeParams,
) -> Result<GeodesicResult> {
    let g = metric.value(x)?;
    let speed0 = g.quad(v, v).max(0.0).sqrt();
    if speed0 < 1e-15 {
        return Err(GeoError::IrregularCurve);
    }
    let mut pos = *x;
    let mut vel = v.scale(1.0 / speed0);
    let steps = ((length * params.steps_per_unit as f64).ceil() as usize).max(2);
    let h = length / steps as f64;
    let mut covered = 0.0;
    let mut drift = 0.0f64;

    let rhs = |p: &VecN, w: &VecN| -> Result<(VecN, VecN)> {
        let conn = christoffel(metric, p)?;
        Ok((*w, conn.accel(w, w).scale(-1.0)))
    };
    for _ in 0..steps {
        let step = (|| -> Result<(VecN, VecN)> {
            let (k1p, k1v) = rhs(&pos, &vel)?;
            let (k2p, k2v) = rhs(&pos.axpy(0.5 * h, &k1p), &vel.axpy(0.5 * h, &k1v))?;
            let (k3p, k3v) = rhs(&pos.axpy(0.5 * h, &k2p), &vel.axpy(0.5 * h, &k2v))?;
            let (k4p, k4v) = rhs(&pos.axpy(h, &k3p), &vel.axpy(h, &k3v))?;
            Ok((
                pos.axpy(h / 6.0, &k1p.add(&k2p.scale(2.0)).add(&k3p.scale(2.0)).add(&k4p)),
                vel.axpy(h / 6.0, &k1v.add(&k2v.scale(2.0)).add(&k3v.scale(2.0)).add(&k4v)),
            ))
        })();
        match step {
            Ok((p, w)) => {
                pos = p;
                vel = w;
                covered += h;
                if let Ok(gm) = metric.value(&pos) {
                    let s = gm.quad(&vel, &vel).max(0.0).sqrt();
                    drift = drift.max((s - 1.0).abs());
                }
            }
            Err(GeoError::OutsideChart) => {
                return Ok(GeodesicResult {
                    endpoint: pos,
                    end_velocity: vel,
                    speed_drift: drift,
                    length_reached: covered,
                    exited: true,
                });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(GeodesicResult {
        endpoint: pos,
        end_velocity: vel,
        speed_drift: drift,
        length_reached: covered,
        exited: false,
    })
}
