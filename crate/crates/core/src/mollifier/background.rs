//! Background metrics for the smoothing integral.
//!
//! Smoothing on a general background needs geodesic distances, radial
//! parallel transport, and the volume measure of geodesic balls. Closed
//! forms are registered for the Euclidean case and the unit round sphere;
//! everything else goes through a numeric 2D fallback that integrates the
//! geodesic equations (see `transport`).

use alloc::sync::Arc;

#[allow(unused_imports)]
use crate::float::FloatExt as _;
use crate::geometry::MetricSource;
use crate::linalg::{MatN, VecN};
use crate::mollifier::kernel::profile;
use crate::quadrature::gauss_on;

/// The unit sphere in its polar chart `(theta, phi)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SphereChart;

impl SphereChart {
    pub fn embed(&self, x: &VecN) -> [f64; 3] {
        let (st, ct) = x[0].sin_cos();
        let (sp, cp) = x[1].sin_cos();
        [st * cp, st * sp, ct]
    }

    pub fn unembed(&self, p: &[f64; 3]) -> VecN {
        let theta = p[2].clamp(-1.0, 1.0).acos();
        let phi = p[1].atan2(p[0]);
        VecN::new2(theta, phi)
    }

    /// Embedded coordinate frame `(d/dtheta, d/dphi)` at `x`.
    pub fn frame(&self, x: &VecN) -> ([f64; 3], [f64; 3]) {
        let (st, ct) = x[0].sin_cos();
        let (sp, cp) = x[1].sin_cos();
        ([ct * cp, ct * sp, -st], [-st * sp, st * cp, 0.0])
    }

    /// Chart metric `diag(1, sin^2 theta)`.
    pub fn metric(&self, x: &VecN) -> MatN {
        let st = x[0].sin();
        MatN::diag(&[1.0, st * st])
    }

    /// Chart components of an embedded tangent vector at `x`.
    pub fn to_chart(&self, x: &VecN, w: &[f64; 3]) -> VecN {
        let (et, ep) = self.frame(x);
        let st = x[0].sin();
        // the frame is orthogonal: <e_theta,e_theta>=1, <e_phi,e_phi>=sin^2
        let a = dot3(w, &et);
        let b = dot3(w, &ep) / (st * st).max(1e-30);
        VecN::new2(a, b)
    }
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn scale3(a: &[f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn add3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn norm3(a: &[f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

/// Background metric used by a smoothing integral.
#[derive(Clone)]
pub enum Background {
    /// Flat chart coordinates; distances and transport are trivial.
    Euclidean,
    /// Unit round sphere in the polar chart.
    Sphere(SphereChart),
    /// A smooth 2D metric with a user-supplied injectivity bound; geodesic
    /// balls are built by shooting (slow; intended for small studies).
    Numeric2d {
        metric: Arc<dyn MetricSource>,
        inj_bound: f64,
    },
}

impl Background {
    pub fn distance(&self, x: &VecN, y: &VecN) -> f64 {
        match self {
            Background::Euclidean => x.sub(y).norm(),
            Background::Sphere(s) => {
                let a = s.embed(x);
                let b = s.embed(y);
                dot3(&a, &b).clamp(-1.0, 1.0).acos()
            }
            Background::Numeric2d { .. } => {
                // only self-distance queries make sense without a solver here
                if x == y {
                    0.0
                } else {
                    f64::NAN
                }
            }
        }
    }

    /// Denominator of the normalized kernel at `x`: the integral of the raw
    /// profile over the geodesic epsilon-ball in background volume.
    pub fn kernel_denominator(&self, x: &VecN, eps: f64) -> f64 {
        match self {
            Background::Euclidean => {
                crate::mollifier::kernel::normalization_constant(2) * eps * eps
            }
            Background::Sphere(_) => {
                // 2 pi int_0^eps profile(r/eps) sin r dr, independent of x
                let (rs, ws) = gauss_on(0.0, eps, 65);
                let mut s = 0.0;
                for (r, w) in rs.iter().zip(&ws) {
                    s += w * profile(r / eps) * r.sin();
                }
                2.0 * core::f64::consts::PI * s
            }
            Background::Numeric2d { .. } => {
                let _ = x;
                f64::NAN // computed by the smoothing engine itself
            }
        }
    }

    /// Exponential map: the point at geodesic distance `r` from `x` in the
    /// unit direction making chart angle `phi_hat` with the first frame
    /// vector, together with the parallel-transported chart frame there.
    /// Closed form on the sphere; `None` for backgrounds that need the
    /// numeric engine.
    pub fn exp_and_transport(
        &self,
        x: &VecN,
        phi_hat: f64,
        r: f64,
    ) -> Option<(VecN, MatN)> {
        match self {
            Background::Euclidean => {
                let (s, c) = phi_hat.sin_cos();
                let mut y = *x;
                y[0] += r * c;
                y[1] += r * s;
                Some((y, MatN::identity(2)))
            }
            Background::Sphere(sc) => {
                let p = sc.embed(x);
                let (et, ep) = sc.frame(x);
                let st = x[0].sin();
                // orthonormal tangent basis at x
                let e1 = et;
                let e2 = scale3(&ep, 1.0 / st.max(1e-30));
                let (sp, cp) = phi_hat.sin_cos();
                let dir = add3(&scale3(&e1, cp), &scale3(&e2, sp));
                let (sr, cr) = r.sin_cos();
                let q = add3(&scale3(&p, cr), &scale3(&dir, sr));
                let y = sc.unembed(&q);
                // transport = rotation by r in the (p, dir) plane
                let axis = cross3(&p, &dir);
                let an = norm3(&axis);
                if an < 1e-14 {
                    return None;
                }
                let axis = scale3(&axis, 1.0 / an);
                let rot = |v: &[f64; 3]| -> [f64; 3] {
                    // Rodrigues rotation by angle r around `axis`
                    let (s, c) = r.sin_cos();
                    let kxv = cross3(&axis, v);
                    let kdv = dot3(&axis, v);
                    add3(
                        &add3(&scale3(v, c), &scale3(&kxv, s)),
                        &scale3(&axis, kdv * (1.0 - c)),
                    )
                };
                // transported chart frame of x, expressed in chart components at y
                let ft = rot(&et);
                let fp = rot(&ep);
                let ct0 = sc.to_chart(&y, &ft);
                let cp0 = sc.to_chart(&y, &fp);
                let mut m = MatN::zeros(2);
                m.set_col(0, &ct0);
                m.set_col(1, &cp0);
                Some((y, m))
            }
            Background::Numeric2d { .. } => None,
        }
    }

    /// Ratio of the background area element to the flat one along the
    /// geodesic polar parametrization: `sin(r)/r` on the sphere, 1 on flat.
    pub fn polar_volume_factor(&self, r: f64) -> f64 {
        match self {
            Background::Euclidean => 1.0,
            Background::Sphere(_) => {
                if r < 1e-12 {
                    1.0
                } else {
                    r.sin() / r
                }
            }
            Background::Numeric2d { .. } => f64::NAN,
        }
    }

    /// Largest admissible smoothing radius, when known in closed form.
    pub fn injectivity_bound(&self) -> Option<f64> {
        match self {
            Background::Euclidean => None, // bounded by the chart margin instead
            Background::Sphere(_) => Some(core::f64::consts::PI),
            Background::Numeric2d { inj_bound, .. } => Some(*inj_bound),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_roundtrip_and_distance() {
        let s = SphereChart;
        let x = VecN::new2(1.1, 0.7);
        let p = s.embed(&x);
        let back = s.unembed(&p);
        assert!((back[0] - x[0]).abs() < 1e-12);
        assert!((back[1] - x[1]).abs() < 1e-12);
        // equator quarter turn
        let bg = Background::Sphere(SphereChart);
        let a = VecN::new2(core::f64::consts::FRAC_PI_2, 0.0);
        let b = VecN::new2(core::f64::consts::FRAC_PI_2, core::f64::consts::FRAC_PI_2);
        assert!((bg.distance(&a, &b) - core::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn sphere_exponential_map_hits_distance() {
        let bg = Background::Sphere(SphereChart);
        let x = VecN::new2(1.0, 0.3);
        for phi in [0.0, 0.7, 2.0, 4.5] {
            let (y, frame) = bg.exp_and_transport(&x, phi, 0.4).unwrap();
            assert!((bg.distance(&x, &y) - 0.4).abs() < 1e-10);
            // transported frame stays a frame (columns independent)
            assert!(frame.det().abs() > 1e-6);
        }
    }

    #[test]
    fn sphere_transport_preserves_round_metric() {
        // g(tau u, tau v) at y equals g(u, v) at x
        let sc = SphereChart;
        let bg = Background::Sphere(sc);
        let x = VecN::new2(0.9, 1.2);
        let gx = sc.metric(&x);
        for (phi, r) in [(0.3, 0.5), (2.1, 0.8), (5.0, 0.2)] {
            let (y, f) = bg.exp_and_transport(&x, phi, r).unwrap();
            let gy = sc.metric(&y);
            for i in 0..2 {
                for j in 0..2 {
                    let want = gx.get(i, j);
                    let got = gy.quad(&f.col(i), &f.col(j));
                    assert!(
                        (want - got).abs() < 1e-10,
                        "transport not isometric: {want} vs {got}"
                    );
                }
            }
        }
    }
}
