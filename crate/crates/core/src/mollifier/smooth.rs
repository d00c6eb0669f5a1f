//! Smoothing operators producing smooth metric evaluators with analytic
//! first and second derivatives.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::calculus::christoffel;
#[allow(unused_imports)]
use crate::float::FloatExt as _;
use crate::geometry::{BoxDomain, CoveringP, Jet, MetricField, MetricSource, SymField};
use crate::linalg::{MatN, VecN};
use crate::mollifier::background::Background;
use crate::mollifier::kernel::{
    normalization_constant, profile, profile_d1_over_s, profile_d2_aux,
};
use crate::quadrature::{gauss_on, BallRule};
use crate::{GeoError, Result};

/// Node counts for the kernel-support quadrature.
#[derive(Clone, Copy, Debug)]
pub struct SmoothParams {
    pub radial: usize,
    pub angular: usize,
}

impl Default for SmoothParams {
    fn default() -> Self {
        SmoothParams { radial: 33, angular: 64 }
    }
}

impl SmoothParams {
    /// Cheaper rule for inner loops (ODE right-hand sides and grid sweeps).
    pub fn coarse() -> Self {
        SmoothParams { radial: 17, angular: 32 }
    }
}

/// Which smoothing operator produced a [`SmoothedTensor`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmoothedMode {
    Background,
    Covering,
}

#[derive(Clone)]
enum Engine {
    Background(Background),
    Covering(Arc<CoveringP>),
}

/// A smooth tensor field obtained by mollifying a possibly non-regular one.
///
/// Evaluators are pure; the struct is cheap to clone and safe to share
/// across workers.
#[derive(Clone)]
pub struct SmoothedTensor {
    source: MetricField,
    epsilon: f64,
    params: SmoothParams,
    region: BoxDomain,
    engine: Engine,
    rule: Arc<BallRule>,
}

/// Smoothing with respect to a background metric on a region `u` compactly
/// contained in the source chart.
pub fn smooth_wrt_background(
    source: &MetricField,
    u: &BoxDomain,
    epsilon: f64,
    background: Background,
    params: SmoothParams,
) -> Result<SmoothedTensor> {
    if !(epsilon > 0.0) {
        return Err(GeoError::BadEpsilon);
    }
    let bound = match &background {
        Background::Euclidean => u.margin_within(&source.chart.domain),
        other => other.injectivity_bound().ok_or(GeoError::NoInjectivityBound)?,
    };
    if !(epsilon < bound) {
        return Err(GeoError::EpsilonTooLarge { epsilon, bound });
    }
    let dim = source.dim();
    Ok(SmoothedTensor {
        source: source.clone(),
        epsilon,
        params,
        region: *u,
        engine: Engine::Background(background),
        rule: Arc::new(BallRule::new(dim, params.radial, params.angular, None)),
    })
}

/// Smoothing with respect to a covering: per-chart Euclidean mollification
/// glued by the partition of unity.
pub fn smooth_wrt_p(
    source: &MetricField,
    covering: &CoveringP,
    epsilon: f64,
    params: SmoothParams,
) -> Result<SmoothedTensor> {
    if !(epsilon > 0.0) {
        return Err(GeoError::BadEpsilon);
    }
    let bound = covering.min_margin().min(1.0);
    if !(epsilon < bound) {
        return Err(GeoError::EpsilonTooLarge { epsilon, bound });
    }
    for c in covering.charts() {
        let needed = c.inner.fattened(epsilon);
        if !source.chart.domain.contains_box(&needed, 1e-12) {
            let avail = c.inner.margin_within(&source.chart.domain);
            return Err(GeoError::EpsilonTooLarge { epsilon, bound: avail });
        }
    }
    let dim = source.dim();
    Ok(SmoothedTensor {
        source: source.clone(),
        epsilon,
        params,
        region: covering.domain,
        engine: Engine::Covering(Arc::new(covering.clone())),
        rule: Arc::new(BallRule::new(dim, params.radial, params.angular, None)),
    })
}

impl SmoothedTensor {
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn mode(&self) -> SmoothedMode {
        match self.engine {
            Engine::Background(_) => SmoothedMode::Background,
            Engine::Covering(_) => SmoothedMode::Covering,
        }
    }

    pub fn region(&self) -> &BoxDomain {
        &self.region
    }

    pub fn source(&self) -> &MetricField {
        &self.source
    }

    /// Full jet of the smoothed field at `x` (value, gradient, hessian of
    /// every component) in one pass over the kernel support.
    pub fn jet(&self, x: &VecN) -> Result<Jet> {
        if !self.region.contains(x, 1e-9) {
            return Err(GeoError::OutsideChart);
        }
        match &self.engine {
            Engine::Background(Background::Euclidean) => self.euclid_jet(x),
            Engine::Background(bg) => self.curved_jet(x, bg),
            Engine::Covering(cov) => self.covering_jet(x, cov),
        }
    }

    /// Euclidean componentwise convolution against the kernel and its
    /// derivatives. Kernels are integrated against `g(y) - g(x)` so that
    /// constant fields are reproduced exactly.
    fn euclid_jet(&self, x: &VecN) -> Result<Jet> {
        let n = self.source.dim();
        let eps = self.epsilon;
        let cn = normalization_constant(n);

        // split the radial rule at a known kink/singularity radius
        let d_rough = self.source.roughness_distance(x);
        let local_rule;
        let rule = if d_rough < eps {
            local_rule =
                BallRule::new(n, self.params.radial, self.params.angular, Some(d_rough / eps));
            &local_rule
        } else {
            self.rule.as_ref()
        };

        let center = self.source.eval_for_quadrature(x).unwrap_or(MatN::zeros(n));
        let mut jet = Jet::zeros(n);
        for (rho, omega, w) in &rule.nodes {
            let y = x.axpy(eps * rho, omega);
            let f = self
                .source
                .eval_for_quadrature(&y)
                .ok_or(GeoError::UndefinedAt { x: y[0], y: if n > 1 { y[1] } else { 0.0 } })?;
            let df = f.sub(&center);
            let e = profile(*rho);
            let g = profile_d1_over_s(*rho);
            let h = profile_d2_aux(*rho);
            jet.value = jet.value.add(&df.scale(w * e));
            for k in 0..n {
                jet.d1[k] = jet.d1[k].add(&df.scale(-w * g * rho * omega[k]));
            }
            for k in 0..n {
                for l in k..n {
                    let delta = if k == l { g } else { 0.0 };
                    let coef = w * (h * rho * rho * omega[k] * omega[l] + delta);
                    jet.d2[k][l] = jet.d2[k][l].add(&df.scale(coef));
                }
            }
        }
        jet.value = jet.value.scale(1.0 / cn).add(&center);
        for k in 0..n {
            jet.d1[k] = jet.d1[k].scale(1.0 / (cn * eps));
        }
        for k in 0..n {
            for l in k..n {
                jet.d2[k][l] = jet.d2[k][l].scale(1.0 / (cn * eps * eps));
                jet.d2[l][k] = jet.d2[k][l];
            }
        }
        Ok(jet)
    }

    /// Covering smoothing: bump-weighted sum of per-chart convolutions.
    /// All charts of a covering share the global coordinates and a Euclidean
    /// background, so the per-chart convolutions coincide and are computed
    /// once; the bump sums carry the derivative terms.
    fn covering_jet(&self, x: &VecN, cov: &CoveringP) -> Result<Jet> {
        let n = self.source.dim();
        let active = cov.charts_at(x);
        if active.is_empty() {
            return Err(GeoError::OutsideChart);
        }
        let conv = self.euclid_jet(x)?;
        let mut s0 = 0.0;
        let mut s1 = [0.0f64; 4];
        let mut s2 = [[0.0f64; 4]; 4];
        for &i in &active {
            s0 += cov.psi(i, x);
            for k in 0..n {
                s1[k] += cov.psi_d1(i, x, k);
            }
            for k in 0..n {
                for l in k..n {
                    s2[k][l] += cov.psi_d2(i, x, k, l);
                }
            }
        }
        let mut jet = Jet::zeros(n);
        jet.value = conv.value.scale(s0);
        for k in 0..n {
            jet.d1[k] = conv.d1[k].scale(s0).add(&conv.value.scale(s1[k]));
        }
        for k in 0..n {
            for l in k..n {
                jet.d2[k][l] = conv.d2[k][l]
                    .scale(s0)
                    .add(&conv.d1[k].scale(s1[l]))
                    .add(&conv.d1[l].scale(s1[k]))
                    .add(&conv.value.scale(s2[k][l]));
                jet.d2[l][k] = jet.d2[k][l];
            }
        }
        Ok(jet)
    }

    /// Smoothing on a curved background: integrate over the geodesic ball,
    /// contracting the source with the radially transported frame of `x`.
    /// Derivatives fall back to central differences of the value.
    fn curved_jet(&self, x: &VecN, bg: &Background) -> Result<Jet> {
        let mut jet = Jet::zeros(self.source.dim());
        jet.value = self.curved_value(x, bg)?;
        let h = 1e-4;
        for k in 0..jet.dim {
            let mut xp = *x;
            xp[k] += h;
            let mut xm = *x;
            xm[k] -= h;
            let vp = self.curved_value(&xp, bg)?;
            let vm = self.curved_value(&xm, bg)?;
            jet.d1[k] = vp.sub(&vm).scale(0.5 / h);
            jet.d2[k][k] = vp.add(&vm).sub(&jet.value.scale(2.0)).scale(1.0 / (h * h));
        }
        for k in 0..jet.dim {
            for l in (k + 1)..jet.dim {
                let mut xpp = *x;
                xpp[k] += h;
                xpp[l] += h;
                let mut xpm = *x;
                xpm[k] += h;
                xpm[l] -= h;
                let mut xmp = *x;
                xmp[k] -= h;
                xmp[l] += h;
                let mut xmm = *x;
                xmm[k] -= h;
                xmm[l] -= h;
                let v = self
                    .curved_value(&xpp, bg)?
                    .sub(&self.curved_value(&xpm, bg)?)
                    .sub(&self.curved_value(&xmp, bg)?)
                    .add(&self.curved_value(&xmm, bg)?)
                    .scale(0.25 / (h * h));
                jet.d2[k][l] = v;
                jet.d2[l][k] = v;
            }
        }
        Ok(jet)
    }

    fn curved_value(&self, x: &VecN, bg: &Background) -> Result<MatN> {
        match bg {
            Background::Numeric2d { metric, .. } => self.numeric2d_value(x, metric.as_ref()),
            _ => self.closed_form_curved_value(x, bg),
        }
    }

    fn closed_form_curved_value(&self, x: &VecN, bg: &Background) -> Result<MatN> {
        let n = self.source.dim();
        let eps = self.epsilon;
        let mut num = MatN::zeros(n);
        let mut den = 0.0;
        for (rho, omega, w) in &self.rule.nodes {
            let phi_hat = omega[1].atan2(omega[0]);
            let r = eps * rho;
            let (y, frame) = bg
                .exp_and_transport(x, phi_hat, r)
                .ok_or(GeoError::NoInjectivityBound)?;
            let f = self
                .source
                .eval_for_quadrature(&y)
                .ok_or(GeoError::UndefinedAt { x: y[0], y: y[1] })?;
            // pull the source back through the transported frame of x
            let pulled = MatN::from_fn(n, |i, j| f.quad(&frame.col(i), &frame.col(j)));
            let vol = bg.polar_volume_factor(r);
            let e = profile(*rho) * w * vol;
            num = num.add(&pulled.scale(e));
            den += e;
        }
        Ok(num.scale(1.0 / den))
    }

    /// Geodesic-polar quadrature by shooting on a numeric 2D background.
    fn numeric2d_value(&self, x: &VecN, metric: &dyn MetricSource) -> Result<MatN> {
        let eps = self.epsilon;
        let na = self.params.angular.max(16);
        let nr = self.params.radial.min(17);
        let g0 = metric.value(x)?;
        // background-orthonormal frame at x: columns of L^{-T}
        let l = g0.cholesky()?;
        let lt_inv = l.transpose().inverse()?;
        let (rg, wg) = gauss_on(0.0, 1.0, nr);
        let dphi = core::f64::consts::TAU / na as f64;

        // shoot one ray per angular node, sampling position + transported
        // frame at each radial node
        let mut rays: Vec<Vec<(VecN, MatN, VecN)>> = Vec::with_capacity(na);
        for a in 0..na {
            let phi = (a as f64 + 0.5) * dphi;
            let (s, c) = phi.sin_cos();
            let dir = lt_inv.mul_vec(&VecN::new2(c, s));
            rays.push(self.shoot_with_frame(metric, x, &dir, eps, &rg)?);
        }

        let mut num = MatN::zeros(2);
        let mut den = 0.0;
        for a in 0..na {
            let prev = &rays[(a + na - 1) % na];
            let next = &rays[(a + 1) % na];
            for (ir, (&rho, &wr)) in rg.iter().zip(&wg).enumerate() {
                let (y, frame, vel) = &rays[a][ir];
                let f = self
                    .source
                    .eval_for_quadrature(y)
                    .ok_or(GeoError::UndefinedAt { x: y[0], y: y[1] })?;
                let pulled = MatN::from_fn(2, |i, j| f.quad(&frame.col(i), &frame.col(j)));
                // area element: |det d(y)/d(r,phi)| * sqrt(det g(y))
                let dydphi = next[ir].0.sub(&prev[ir].0).scale(1.0 / (2.0 * dphi));
                let jac = (vel[0] * dydphi[1] - vel[1] * dydphi[0]).abs();
                let gy = metric.value(y)?;
                let vol = jac * gy.det().max(0.0).sqrt();
                let e = profile(rho) * wr * dphi * vol * eps;
                num = num.add(&pulled.scale(e));
                den += e;
            }
        }
        if den <= 0.0 {
            return Err(GeoError::NoInjectivityBound);
        }
        Ok(num.scale(1.0 / den))
    }

    /// Integrate the geodesic from `x` with initial velocity `dir` and the
    /// transport of the chart frame, recording states at radii `eps * rg`.
    #[allow(clippy::type_complexity)]
    fn shoot_with_frame(
        &self,
        metric: &dyn MetricSource,
        x: &VecN,
        dir: &VecN,
        eps: f64,
        rg: &[f64],
    ) -> Result<Vec<(VecN, MatN, VecN)>> {
        // state: position, velocity, two transported frame vectors
        let mut pos = *x;
        let mut vel = *dir;
        let mut f0 = VecN::new2(1.0, 0.0);
        let mut f1 = VecN::new2(0.0, 1.0);
        let mut out = Vec::with_capacity(rg.len());
        let mut t = 0.0;
        let steps_per_unit = 400.0;
        for &rho in rg {
            let target = eps * rho;
            let nsteps = ((target - t) * steps_per_unit).ceil().max(2.0) as usize;
            let h = (target - t) / nsteps as f64;
            for _ in 0..nsteps {
                let deriv = |p: &VecN, v: &VecN, a: &VecN, b: &VecN| -> Result<(VecN, VecN, VecN, VecN)> {
                    let gamma = christoffel(metric, p)?;
                    Ok((*v, gamma.accel(v, v).scale(-1.0), gamma.accel(v, a).scale(-1.0), gamma.accel(v, b).scale(-1.0)))
                };
                let (k1p, k1v, k1a, k1b) = deriv(&pos, &vel, &f0, &f1)?;
                let (k2p, k2v, k2a, k2b) = deriv(
                    &pos.axpy(0.5 * h, &k1p),
                    &vel.axpy(0.5 * h, &k1v),
                    &f0.axpy(0.5 * h, &k1a),
                    &f1.axpy(0.5 * h, &k1b),
                )?;
                let (k3p, k3v, k3a, k3b) = deriv(
                    &pos.axpy(0.5 * h, &k2p),
                    &vel.axpy(0.5 * h, &k2v),
                    &f0.axpy(0.5 * h, &k2a),
                    &f1.axpy(0.5 * h, &k2b),
                )?;
                let (k4p, k4v, k4a, k4b) = deriv(
                    &pos.axpy(h, &k3p),
                    &vel.axpy(h, &k3v),
                    &f0.axpy(h, &k3a),
                    &f1.axpy(h, &k3b),
                )?;
                let upd = |s: &VecN, a: &VecN, b: &VecN, c: &VecN, d: &VecN| {
                    s.axpy(h / 6.0, &a.add(&b.scale(2.0)).add(&c.scale(2.0)).add(d))
                };
                pos = upd(&pos, &k1p, &k2p, &k3p, &k4p);
                vel = upd(&vel, &k1v, &k2v, &k3v, &k4v);
                f0 = upd(&f0, &k1a, &k2a, &k3a, &k4a);
                f1 = upd(&f1, &k1b, &k2b, &k3b, &k4b);
            }
            t = target;
            let mut fr = MatN::zeros(2);
            fr.set_col(0, &f0);
            fr.set_col(1, &f1);
            out.push((pos, fr, vel));
        }
        Ok(out)
    }

    /// Smallest metric eigenvalue over the sample points.
    pub fn min_eigenvalue_on(&self, points: &[VecN]) -> Result<f64> {
        let mut lo = f64::INFINITY;
        for p in points {
            let v = self.value(p)?;
            let eigs = v.sym_eigenvalues();
            lo = lo.min(eigs[0]);
        }
        Ok(lo)
    }
}

impl MetricSource for SmoothedTensor {
    fn dim(&self) -> usize {
        self.source.dim()
    }
    fn value(&self, x: &VecN) -> Result<MatN> {
        Ok(self.jet(x)?.value)
    }
    fn d1(&self, x: &VecN, k: usize) -> Result<MatN> {
        Ok(self.jet(x)?.d1[k])
    }
    fn d2(&self, x: &VecN, k: usize, l: usize) -> Result<MatN> {
        Ok(self.jet(x)?.d2[k][l])
    }
    fn jet(&self, x: &VecN) -> Result<Jet> {
        SmoothedTensor::jet(self, x)
    }
}

impl SymField for SmoothedTensor {
    fn dim(&self) -> usize {
        self.source.dim()
    }
    fn eval(&self, x: &VecN) -> Option<MatN> {
        self.value(x).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_covering, Chart, Regularity, UndefinedSet};
    use crate::mollifier::SphereChart;
    use crate::quadrature::BallRule;
    use rand::{Rng, SeedableRng};

    fn const_field(m: MatN) -> MetricField {
        MetricField::new(
            Chart::new("c", BoxDomain::square(-2.0, 2.0).unwrap()),
            Regularity::Smooth,
            UndefinedSet::empty(),
            move |_| Some(m),
        )
    }

    fn degenerate_field() -> MetricField {
        // diag(1, x^2): positive definite off the axis, degenerate on it
        MetricField::new(
            Chart::new("deg", BoxDomain::square(-2.0, 2.0).unwrap()),
            Regularity::LpLoc(2.0),
            UndefinedSet::empty(),
            |x| Some(MatN::diag(&[1.0, x[0] * x[0]])),
        )
    }

    #[test]
    fn constant_field_is_a_fixed_point() {
        let m = MatN::from_fn(2, |i, j| [[2.0, 0.3], [0.3, 1.5]][i][j]);
        let f = const_field(m);
        let u = BoxDomain::square(-1.0, 1.0).unwrap();
        let sm = smooth_wrt_background(&f, &u, 0.3, Background::Euclidean, SmoothParams::default())
            .unwrap();
        let jet = sm.jet(&VecN::new2(0.2, -0.4)).unwrap();
        assert!(jet.value.sub(&m).max_abs() < 1e-14);
        for k in 0..2 {
            assert!(jet.d1[k].max_abs() < 1e-13);
            for l in 0..2 {
                assert!(jet.d2[k][l].max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn epsilon_bounds_enforced() {
        let f = const_field(MatN::identity(2));
        let u = BoxDomain::square(-1.0, 1.0).unwrap();
        // chart is [-2,2]^2, so the margin is 1
        match smooth_wrt_background(&f, &u, 1.5, Background::Euclidean, SmoothParams::default()) {
            Err(GeoError::EpsilonTooLarge { bound, .. }) => assert!((bound - 1.0).abs() < 1e-12),
            other => panic!("expected epsilon bound error, got {:?}", other.map(|_| ())),
        }
        assert!(smooth_wrt_background(
            &f,
            &u,
            0.0,
            Background::Euclidean,
            SmoothParams::default()
        )
        .is_err());
    }

    #[test]
    fn degenerate_metric_second_entry_is_second_moment() {
        // smoothed g_22 at the degenerate axis equals eps^2 times the
        // kernel's per-axis second moment; oracle by direct ball quadrature
        let f = degenerate_field();
        let u = BoxDomain::square(-1.0, 1.0).unwrap();
        for eps in [0.2, 0.1] {
            let sm =
                smooth_wrt_background(&f, &u, eps, Background::Euclidean, SmoothParams::default())
                    .unwrap();
            let got = sm.value(&VecN::new2(0.0, 0.5)).unwrap();
            // oracle: independent rule with different node counts
            let rule = BallRule::new(2, 60, 120, None);
            let cn = normalization_constant(2);
            let m2: f64 = rule
                .nodes
                .iter()
                .map(|(r, w_dir, w)| w * profile(*r) * (r * w_dir[0]) * (r * w_dir[0]))
                .sum::<f64>()
                / cn;
            let want = eps * eps * m2;
            assert!(got.get(1, 1) > 0.0);
            assert!(
                (got.get(1, 1) - want).abs() < 1e-9,
                "eps {eps}: {} vs {want}",
                got.get(1, 1)
            );
            assert!((got.get(0, 0) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn plateau_value_reproduced_exactly() {
        // layered metric: constant plateaus in |x|; deep inside a plateau the
        // kernel support sees only the constant
        let f = MetricField::new(
            Chart::new("step", BoxDomain::square(-2.0, 2.0).unwrap()),
            Regularity::Measurable,
            UndefinedSet::empty(),
            |x| {
                let ax = x[0].abs();
                let k = if ax > 0.0 { (-ax.log2()).floor() as i64 } else { i64::MAX };
                let v = if k.rem_euclid(2) == 0 { 1.0 } else { 2.0 };
                Some(MatN::diag(&[v, v]))
            },
        );
        let u = BoxDomain::square(-1.0, 1.0).unwrap();
        // plateau (1/2, 1]: x = 0.75, distance to the boundary 0.25
        let sm = smooth_wrt_background(&f, &u, 0.2, Background::Euclidean, SmoothParams::default())
            .unwrap();
        let got = sm.value(&VecN::new2(0.75, 0.0)).unwrap();
        assert!(got.sub(&MatN::diag(&[1.0, 1.0])).max_abs() < 1e-14);
    }

    #[test]
    fn linearity_of_smoothing() {
        let fa = degenerate_field();
        let fb = MetricField::new(
            Chart::new("b", BoxDomain::square(-2.0, 2.0).unwrap()),
            Regularity::C0,
            UndefinedSet::empty(),
            |x| {
                Some(MatN::from_fn(2, |i, j| {
                    [[1.0 + x[1] * x[1], 0.2 * x[0]], [0.2 * x[0], 2.0]][i][j]
                }))
            },
        );
        let combo = {
            let (a, b) = (0.7, -1.3);
            MetricField::new(
                Chart::new("combo", BoxDomain::square(-2.0, 2.0).unwrap()),
                Regularity::Measurable,
                UndefinedSet::empty(),
                move |x| {
                    let ma = MatN::diag(&[1.0, x[0] * x[0]]);
                    let mb = MatN::from_fn(2, |i, j| {
                        [[1.0 + x[1] * x[1], 0.2 * x[0]], [0.2 * x[0], 2.0]][i][j]
                    });
                    Some(ma.scale(a).add(&mb.scale(b)))
                },
            )
        };
        let u = BoxDomain::square(-1.0, 1.0).unwrap();
        let p = SmoothParams::default();
        let eps = 0.15;
        let sa = smooth_wrt_background(&fa, &u, eps, Background::Euclidean, p).unwrap();
        let sb = smooth_wrt_background(&fb, &u, eps, Background::Euclidean, p).unwrap();
        let sc = smooth_wrt_background(&combo, &u, eps, Background::Euclidean, p).unwrap();
        let x = VecN::new2(0.3, -0.2);
        let want = sa.value(&x).unwrap().scale(0.7).add(&sb.value(&x).unwrap().scale(-1.3));
        let got = sc.value(&x).unwrap();
        assert!(got.sub(&want).max_abs() < 1e-10);
    }

    #[test]
    fn covering_single_chart_matches_background() {
        let f = degenerate_field();
        let dom = BoxDomain::square(-0.5, 0.5).unwrap();
        let cov = build_covering(&dom, 2.0, 0.5).unwrap();
        assert_eq!(cov.n_charts(), 1);
        let eps = 0.1;
        let p = SmoothParams::default();
        let via_p = smooth_wrt_p(&f, &cov, eps, p).unwrap();
        let via_bg = smooth_wrt_background(&f, &dom, eps, Background::Euclidean, p).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x = VecN::new2(rng.gen_range(-0.45..0.45), rng.gen_range(-0.45..0.45));
            let a = via_p.value(&x).unwrap();
            let b = via_bg.value(&x).unwrap();
            assert!(a.sub(&b).max_abs() <= 1e-12);
        }
    }

    #[test]
    fn covering_constant_reproduced() {
        let m = MatN::diag(&[1.2, 0.8]);
        let f = const_field(m);
        let dom = BoxDomain::square(-1.0, 1.0).unwrap();
        let cov = build_covering(&dom, 0.5, 0.1).unwrap();
        let sm = smooth_wrt_p(&f, &cov, 0.08, SmoothParams::default()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..30 {
            let x = VecN::new2(rng.gen_range(-0.99..0.99), rng.gen_range(-0.99..0.99));
            let jet = sm.jet(&x).unwrap();
            assert!(jet.value.sub(&m).max_abs() < 1e-12);
            for k in 0..2 {
                assert!(jet.d1[k].max_abs() < 1e-11, "psi-derivative leak");
            }
        }
    }

    #[test]
    fn covering_epsilon_preconditions() {
        let f = const_field(MatN::identity(2));
        let dom = BoxDomain::square(-1.0, 1.0).unwrap();
        let cov = build_covering(&dom, 0.5, 0.1).unwrap();
        // margin is 0.25 by default
        match smooth_wrt_p(&f, &cov, 0.5, SmoothParams::default()) {
            Err(GeoError::EpsilonTooLarge { bound, .. }) => assert!(bound <= 0.25 + 1e-12),
            other => panic!("expected bound error, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn analytic_derivatives_match_finite_differences_of_value() {
        let f = MetricField::new(
            Chart::new("smooth", BoxDomain::square(-2.0, 2.0).unwrap()),
            Regularity::Smooth,
            UndefinedSet::empty(),
            |x| {
                Some(MatN::from_fn(2, |i, j| {
                    [[1.0 + 0.2 * (3.0 * x[0]).sin(), 0.1 * x[0] * x[1]],
                     [0.1 * x[0] * x[1], 1.5 + 0.3 * (2.0 * x[1]).cos()]][i][j]
                }))
            },
        );
        let u = BoxDomain::square(-1.0, 1.0).unwrap();
        let sm = smooth_wrt_background(&f, &u, 0.2, Background::Euclidean, SmoothParams::default())
            .unwrap();
        let x = VecN::new2(0.25, -0.15);
        let jet = sm.jet(&x).unwrap();
        let h = 1e-4;
        for k in 0..2 {
            let mut xp = x;
            xp[k] += h;
            let mut xm = x;
            xm[k] -= h;
            let fd = sm.value(&xp).unwrap().sub(&sm.value(&xm).unwrap()).scale(0.5 / h);
            let diff = jet.d1[k].sub(&fd).max_abs();
            assert!(diff <= 1e-5 * (1.0 + jet.d1[k].max_abs()), "d{k} differs by {diff}");
            let fd2 = sm
                .value(&xp)
                .unwrap()
                .add(&sm.value(&xm).unwrap())
                .sub(&sm.value(&x).unwrap().scale(2.0))
                .scale(1.0 / (h * h));
            let diff2 = jet.d2[k][k].sub(&fd2).max_abs();
            assert!(diff2 <= 1e-4 * (1.0 + jet.d2[k][k].max_abs()), "d2{k} differs by {diff2}");
        }
        // mixed partials are symmetric by construction
        assert!(jet.d2[0][1].sub(&jet.d2[1][0]).max_abs() < 1e-14);
    }

    #[test]
    fn positivity_preserved_for_degenerate_source() {
        let f = degenerate_field();
        let dom = BoxDomain::square(-0.8, 0.8).unwrap();
        let cov = build_covering(&dom, 0.8, 0.2).unwrap();
        let sm = smooth_wrt_p(&f, &cov, 0.1, SmoothParams::default()).unwrap();
        let mut pts = alloc::vec::Vec::new();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..50 {
            pts.push(VecN::new2(rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7)));
        }
        pts.push(VecN::new2(0.0, 0.0));
        let lo = sm.min_eigenvalue_on(&pts).unwrap();
        assert!(lo > 0.0, "min eigenvalue {lo}");
    }

    #[test]
    fn sphere_background_fixes_its_own_metric() {
        // the round metric pulled back through its own radial transport is
        // constant in the integrand, so smoothing reproduces it exactly
        let sc = SphereChart;
        let f = MetricField::new(
            Chart::new("round", BoxDomain::new(&[0.4, -0.5], &[2.7, 6.8]).unwrap()),
            Regularity::Smooth,
            UndefinedSet::empty(),
            move |x| Some(sc.metric(x)),
        );
        let u = BoxDomain::new(&[1.0, 0.5], &[2.0, 2.0]).unwrap();
        let sm = smooth_wrt_background(
            &f,
            &u,
            0.25,
            Background::Sphere(SphereChart),
            SmoothParams::default(),
        )
        .unwrap();
        for (th, ph) in [(1.2, 1.0), (1.7, 0.8), (1.05, 1.9)] {
            let x = VecN::new2(th, ph);
            let got = sm.value(&x).unwrap();
            let want = SphereChart.metric(&x);
            assert!(
                got.sub(&want).max_abs() < 1e-8,
                "at ({th},{ph}): {:?} vs {:?}",
                got,
                want
            );
        }
    }

    #[test]
    fn numeric2d_background_agrees_with_closed_form_sphere() {
        let sc = SphereChart;
        // a non-trivial source field on the sphere chart
        let f = MetricField::new(
            Chart::new("src", BoxDomain::new(&[0.4, -0.5], &[2.7, 6.8]).unwrap()),
            Regularity::C0,
            UndefinedSet::empty(),
            |x| Some(MatN::diag(&[1.0 + 0.3 * x[0], 1.0 + 0.1 * x[1]])),
        );
        let sphere_metric = MetricField::new(
            Chart::new("bg", BoxDomain::new(&[0.3, -1.0], &[2.8, 7.3]).unwrap()),
            Regularity::Smooth,
            UndefinedSet::empty(),
            move |x| Some(sc.metric(x)),
        )
        .with_d1(|x, k| {
            if k == 0 {
                MatN::diag(&[0.0, 2.0 * x[0].sin() * x[0].cos()])
            } else {
                MatN::zeros(2)
            }
        })
        .with_d2(|x, k, l| {
            if k == 0 && l == 0 {
                MatN::diag(&[0.0, 2.0 * (2.0 * x[0]).cos()])
            } else {
                MatN::zeros(2)
            }
        });
        let u = BoxDomain::new(&[1.2, 1.0], &[1.6, 1.4]).unwrap();
        let eps = 0.15;
        let p = SmoothParams { radial: 9, angular: 24 };
        let closed = smooth_wrt_background(&f, &u, eps, Background::Sphere(SphereChart), p)
            .unwrap();
        let numeric = smooth_wrt_background(
            &f,
            &u,
            eps,
            Background::Numeric2d { metric: Arc::new(sphere_metric), inj_bound: 1.0 },
            p,
        )
        .unwrap();
        let x = VecN::new2(1.4, 1.2);
        let a = closed.value(&x).unwrap();
        let b = numeric.value(&x).unwrap();
        assert!(a.sub(&b).max_abs() < 2e-3, "{a:?} vs {b:?}");
    }
}
