//! Tensor fields of type (0,2) on chart domains, possibly non-regular.

use alloc::sync::Arc;
use alloc::vec::Vec;

#[allow(unused_imports)]
use crate::float::FloatExt as _;
use crate::geometry::Chart;
use crate::linalg::{MatN, VecN};
use crate::{GeoError, Result};

/// Regularity class a field is declared to have.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Regularity {
    Smooth,
    C0,
    /// Locally p-summable.
    LpLoc(f64),
    Measurable,
}

/// Where a field is allowed to be undefined: a finite union of isolated
/// points and straight segments, all of measure zero.
#[derive(Clone, Debug, Default)]
pub struct UndefinedSet {
    pub points: Vec<VecN>,
    pub segments: Vec<(VecN, VecN)>,
}

impl UndefinedSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn point(p: VecN) -> Self {
        UndefinedSet { points: alloc::vec![p], segments: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.segments.is_empty()
    }

    /// Euclidean distance from `x` to the set (infinite when empty).
    pub fn distance(&self, x: &VecN) -> f64 {
        let mut d = f64::INFINITY;
        for p in &self.points {
            d = d.min(x.sub(p).norm());
        }
        for (a, b) in &self.segments {
            let ab = b.sub(a);
            let t = (x.sub(a).dot(&ab) / ab.dot(&ab)).clamp(0.0, 1.0);
            d = d.min(x.sub(&a.axpy(t, &ab)).norm());
        }
        d
    }
}

/// Anything that yields a symmetric matrix at a point; `None` marks
/// points where the field is undefined or outside its domain.
pub trait SymField: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &VecN) -> Option<MatN>;
}

/// A constant symmetric field (e.g. a Euclidean background).
#[derive(Clone, Copy, Debug)]
pub struct ConstField(pub MatN);

impl SymField for ConstField {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval(&self, _x: &VecN) -> Option<MatN> {
        Some(self.0)
    }
}

/// Pointwise difference of two fields, used by convergence reports.
pub struct DiffField<'a> {
    pub a: &'a dyn SymField,
    pub b: &'a dyn SymField,
}

impl SymField for DiffField<'_> {
    fn dim(&self) -> usize {
        self.a.dim()
    }
    fn eval(&self, x: &VecN) -> Option<MatN> {
        Some(self.a.eval(x)?.sub(&self.b.eval(x)?))
    }
}

type EvalFn = dyn Fn(&VecN) -> Option<MatN> + Send + Sync;
type Deriv1Fn = dyn Fn(&VecN, usize) -> MatN + Send + Sync;
type Deriv2Fn = dyn Fn(&VecN, usize, usize) -> MatN + Send + Sync;
type DistFn = dyn Fn(&VecN) -> f64 + Send + Sync;

/// A (0,2) tensor field on a chart, given by an evaluator and optional
/// analytic derivatives. Immutable after construction; evaluation is pure.
#[derive(Clone)]
pub struct MetricField {
    pub chart: Chart,
    pub regularity: Regularity,
    pub undefined: UndefinedSet,
    eval_fn: Arc<EvalFn>,
    d1_fn: Option<Arc<Deriv1Fn>>,
    d2_fn: Option<Arc<Deriv2Fn>>,
    kink_fn: Option<Arc<DistFn>>,
}

impl MetricField {
    pub fn new(
        chart: Chart,
        regularity: Regularity,
        undefined: UndefinedSet,
        eval_fn: impl Fn(&VecN) -> Option<MatN> + Send + Sync + 'static,
    ) -> Self {
        MetricField {
            chart,
            regularity,
            undefined,
            eval_fn: Arc::new(eval_fn),
            d1_fn: None,
            d2_fn: None,
            kink_fn: None,
        }
    }

    /// Declare the distance to the locus where the field is defined but not
    /// smooth (a jump or crease); quadrature rules split there.
    pub fn with_kink_distance(
        mut self,
        f: impl Fn(&VecN) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.kink_fn = Some(Arc::new(f));
        self
    }

    /// Distance to the nearest point where the field is undefined or
    /// non-smooth (infinite when the field is smooth everywhere).
    pub fn roughness_distance(&self, x: &VecN) -> f64 {
        let mut d = self.undefined.distance(x);
        if let Some(f) = &self.kink_fn {
            d = d.min(f(x).max(0.0));
        }
        d
    }

    /// Attach closed-form first derivatives `x, k -> d g / d x_k`.
    pub fn with_d1(mut self, f: impl Fn(&VecN, usize) -> MatN + Send + Sync + 'static) -> Self {
        self.d1_fn = Some(Arc::new(f));
        self
    }

    /// Attach closed-form second derivatives `x, k, l -> d^2 g / d x_k d x_l`.
    pub fn with_d2(
        mut self,
        f: impl Fn(&VecN, usize, usize) -> MatN + Send + Sync + 'static,
    ) -> Self {
        self.d2_fn = Some(Arc::new(f));
        self
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn has_analytic_derivatives(&self) -> bool {
        self.d1_fn.is_some() && self.d2_fn.is_some()
    }

    /// Evaluate, reporting undefined points and out-of-chart points as errors.
    pub fn eval(&self, x: &VecN) -> Result<MatN> {
        if !self.chart.domain.contains(x, 1e-12) {
            return Err(GeoError::OutsideChart);
        }
        match (self.eval_fn)(x) {
            Some(m) => Ok(m),
            None => Err(GeoError::UndefinedAt {
                x: x[0],
                y: if x.dim() > 1 { x[1] } else { 0.0 },
            }),
        }
    }

    /// Evaluation for quadrature: a node that lands exactly on the declared
    /// undefined set is nudged by 1e-12 along a fixed direction (null sets
    /// do not affect integrals). The chart-containment check is skipped so
    /// that smoothing can read the field slightly beyond a covering box.
    pub fn eval_for_quadrature(&self, x: &VecN) -> Option<MatN> {
        if let Some(m) = (self.eval_fn)(x) {
            return Some(m);
        }
        if self.undefined.is_empty() {
            return None;
        }
        let mut y = *x;
        y[0] += 1e-12;
        if y.dim() > 1 {
            y[1] += 1e-12;
        }
        (self.eval_fn)(&y)
    }
}

impl SymField for MetricField {
    fn dim(&self) -> usize {
        self.chart.dim()
    }
    fn eval(&self, x: &VecN) -> Option<MatN> {
        if !self.chart.domain.contains(x, 1e-12) {
            return None;
        }
        (self.eval_fn)(x)
    }
}

/// Value plus first and second derivatives of a matrix field at a point.
#[derive(Clone, Copy, Debug)]
pub struct Jet {
    pub dim: usize,
    pub value: MatN,
    pub d1: [MatN; 4],
    pub d2: [[MatN; 4]; 4],
}

impl Jet {
    pub fn zeros(dim: usize) -> Self {
        let z = MatN::zeros(dim);
        Jet { dim, value: z, d1: [z; 4], d2: [[z; 4]; 4] }
    }
}

/// A metric with first and second derivatives, the input to the
/// connection/curvature machinery.
pub trait MetricSource: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &VecN) -> Result<MatN>;
    fn d1(&self, x: &VecN, k: usize) -> Result<MatN>;
    fn d2(&self, x: &VecN, k: usize, l: usize) -> Result<MatN>;

    /// Full jet at `x`; implementors with a cheaper one-pass path override.
    fn jet(&self, x: &VecN) -> Result<Jet> {
        let n = self.dim();
        let mut jet = Jet::zeros(n);
        jet.value = self.value(x)?;
        for k in 0..n {
            jet.d1[k] = self.d1(x, k)?;
        }
        for k in 0..n {
            for l in k..n {
                jet.d2[k][l] = self.d2(x, k, l)?;
                jet.d2[l][k] = jet.d2[k][l];
            }
        }
        Ok(jet)
    }
}

fn fd_step(x: &VecN) -> f64 {
    1e-5 * (1.0 + x.norm())
}

impl MetricSource for MetricField {
    fn dim(&self) -> usize {
        self.chart.dim()
    }

    fn value(&self, x: &VecN) -> Result<MatN> {
        self.eval(x)
    }

    /// Analytic when attached, otherwise Richardson-extrapolated central
    /// differences with step `1e-5 (1 + |x|)`.
    fn d1(&self, x: &VecN, k: usize) -> Result<MatN> {
        if let Some(f) = &self.d1_fn {
            return Ok(f(x, k));
        }
        let h = fd_step(x);
        let central = |h: f64| -> Result<MatN> {
            let mut xp = *x;
            xp[k] += h;
            let mut xm = *x;
            xm[k] -= h;
            Ok(self.eval(&xp)?.sub(&self.eval(&xm)?).scale(0.5 / h))
        };
        let d_h = central(h)?;
        let d_h2 = central(0.5 * h)?;
        Ok(d_h2.scale(4.0 / 3.0).sub(&d_h.scale(1.0 / 3.0)))
    }

    fn d2(&self, x: &VecN, k: usize, l: usize) -> Result<MatN> {
        if let Some(f) = &self.d2_fn {
            return Ok(f(x, k, l));
        }
        let h = fd_step(x);
        if k == l {
            let central = |h: f64| -> Result<MatN> {
                let mut xp = *x;
                xp[k] += h;
                let mut xm = *x;
                xm[k] -= h;
                let c = self.eval(x)?;
                Ok(self
                    .eval(&xp)?
                    .add(&self.eval(&xm)?)
                    .sub(&c.scale(2.0))
                    .scale(1.0 / (h * h)))
            };
            let d_h = central(h)?;
            let d_h2 = central(0.5 * h)?;
            Ok(d_h2.scale(4.0 / 3.0).sub(&d_h.scale(1.0 / 3.0)))
        } else {
            let central = |h: f64| -> Result<MatN> {
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
                Ok(self
                    .eval(&xpp)?
                    .sub(&self.eval(&xpm)?)
                    .sub(&self.eval(&xmp)?)
                    .add(&self.eval(&xmm)?)
                    .scale(0.25 / (h * h)))
            };
            let d_h = central(h)?;
            let d_h2 = central(0.5 * h)?;
            Ok(d_h2.scale(4.0 / 3.0).sub(&d_h.scale(1.0 / 3.0)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BoxDomain;

    fn poly_field() -> MetricField {
        let chart = Chart::new("t", BoxDomain::square(-2.0, 2.0).unwrap());
        MetricField::new(chart, Regularity::Smooth, UndefinedSet::empty(), |x| {
            let mut m = MatN::identity(2);
            m.set(0, 0, 1.0 + x[0] * x[0] * x[1]);
            m.set(0, 1, x[0] * x[1]);
            m.set(1, 0, x[0] * x[1]);
            m.set(1, 1, 2.0 + x[1] * x[1] * x[1]);
            Some(m)
        })
    }

    #[test]
    fn fd_derivatives_match_closed_form() {
        let f = poly_field();
        let x = VecN::new2(0.7, -0.4);
        let d0 = f.d1(&x, 0).unwrap();
        assert!((d0.get(0, 0) - 2.0 * x[0] * x[1]).abs() < 1e-9);
        assert!((d0.get(0, 1) - x[1]).abs() < 1e-9);
        let d11 = f.d2(&x, 1, 1).unwrap();
        assert!((d11.get(1, 1) - 6.0 * x[1]).abs() < 1e-4);
        let d01 = f.d2(&x, 0, 1).unwrap();
        assert!((d01.get(0, 0) - 2.0 * x[0]).abs() < 1e-4);
        assert!((d01.get(0, 1) - 1.0).abs() < 1e-4);
    }

    #[test]
    fn undefined_points_signal() {
        let chart = Chart::new("u", BoxDomain::square(-1.0, 1.0).unwrap());
        let f = MetricField::new(
            chart,
            Regularity::LpLoc(1.5),
            UndefinedSet::point(VecN::new2(0.0, 0.0)),
            |x| {
                let r = x.norm();
                if r == 0.0 {
                    None
                } else {
                    Some(MatN::identity(2).scale(1.0 / r.sqrt()))
                }
            },
        );
        assert!(matches!(
            f.eval(&VecN::new2(0.0, 0.0)),
            Err(GeoError::UndefinedAt { .. })
        ));
        // quadrature path nudges off the null set
        assert!(f.eval_for_quadrature(&VecN::new2(0.0, 0.0)).is_some());
        assert!(f.eval(&VecN::new2(0.5, 0.0)).is_ok());
    }

    #[test]
    fn undefined_set_distance() {
        let s = UndefinedSet {
            points: alloc::vec![VecN::new2(1.0, 0.0)],
            segments: alloc::vec![(VecN::new2(0.0, -1.0), VecN::new2(0.0, 1.0))],
        };
        assert!((s.distance(&VecN::new2(0.5, 0.0)) - 0.5).abs() < 1e-15);
        assert!((s.distance(&VecN::new2(0.0, 2.0)) - 1.0).abs() < 1e-15);
    }
}
