//! Piecewise regular curves in chart coordinates.

use alloc::vec::Vec;

#[allow(unused_imports)]
use crate::float::FloatExt as _;
use crate::linalg::VecN;
use crate::{GeoError, Result};

/// One smooth piece of a curve, parametrized on a local `s` in `[0, 1]`.
#[derive(Clone, Copy, Debug)]
pub enum Segment {
    Line { from: VecN, to: VecN },
    Arc { center: VecN, radius: f64, ang_from: f64, ang_to: f64 },
}

impl Segment {
    pub fn point(&self, s: f64) -> VecN {
        match self {
            Segment::Line { from, to } => from.axpy(s, &to.sub(from)),
            Segment::Arc { center, radius, ang_from, ang_to } => {
                let a = ang_from + s * (ang_to - ang_from);
                let (sa, ca) = a.sin_cos();
                let mut p = *center;
                p[0] += radius * ca;
                p[1] += radius * sa;
                p
            }
        }
    }

    /// Velocity with respect to the local parameter.
    pub fn velocity(&self, s: f64) -> VecN {
        match self {
            Segment::Line { from, to } => to.sub(from),
            Segment::Arc { center, radius, ang_from, ang_to } => {
                let da = ang_to - ang_from;
                let a = ang_from + s * da;
                let (sa, ca) = a.sin_cos();
                let mut v = VecN::zeros(center.dim());
                v[0] = -radius * sa * da;
                v[1] = radius * ca * da;
                v
            }
        }
    }

    /// Second parameter derivative.
    pub fn accel(&self, s: f64) -> VecN {
        match self {
            Segment::Line { from, .. } => VecN::zeros(from.dim()),
            Segment::Arc { center, radius, ang_from, ang_to } => {
                let da = ang_to - ang_from;
                let a = ang_from + s * da;
                let (sa, ca) = a.sin_cos();
                let mut v = VecN::zeros(center.dim());
                v[0] = -radius * ca * da * da;
                v[1] = -radius * sa * da * da;
                v
            }
        }
    }
}

/// A piecewise regular curve: global parameter `t` runs over
/// `[breakpoints[0], breakpoints[last]]` and segment `i` covers
/// `[breakpoints[i], breakpoints[i+1]]`.
#[derive(Clone, Debug)]
pub struct CurveSpec {
    pub breakpoints: Vec<f64>,
    pub segments: Vec<Segment>,
    /// Whether the junction into segment `i+1` is a flagged transversal
    /// edge crossing (one flag per interior breakpoint).
    pub transversal: Vec<bool>,
}

impl CurveSpec {
    /// A single-segment curve on `[0, 1]`.
    pub fn single(seg: Segment) -> Self {
        CurveSpec {
            breakpoints: alloc::vec![0.0, 1.0],
            segments: alloc::vec![seg],
            transversal: Vec::new(),
        }
    }

    /// A straight line from `a` to `b` on `[0, 1]`.
    pub fn line(a: VecN, b: VecN) -> Self {
        Self::single(Segment::Line { from: a, to: b })
    }

    pub fn t_start(&self) -> f64 {
        self.breakpoints[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    fn segment_at(&self, t: f64) -> (usize, f64) {
        let m = self.segments.len();
        for i in 0..m {
            let (a, b) = (self.breakpoints[i], self.breakpoints[i + 1]);
            if t <= b || i == m - 1 {
                return (i, ((t - a) / (b - a)).clamp(0.0, 1.0));
            }
        }
        unreachable!()
    }

    pub fn point(&self, t: f64) -> VecN {
        let (i, s) = self.segment_at(t);
        self.segments[i].point(s)
    }

    /// Velocity with respect to the global parameter.
    pub fn velocity(&self, t: f64) -> VecN {
        let (i, s) = self.segment_at(t);
        let dt = self.breakpoints[i + 1] - self.breakpoints[i];
        self.segments[i].velocity(s).scale(1.0 / dt)
    }

    /// Continuity at breakpoints and a nonvanishing-velocity probe
    /// (100 samples per segment).
    pub fn validate(&self) -> Result<()> {
        if self.segments.is_empty() || self.breakpoints.len() != self.segments.len() + 1 {
            return Err(GeoError::IrregularCurve);
        }
        for w in self.breakpoints.windows(2) {
            if !(w[0] < w[1]) {
                return Err(GeoError::IrregularCurve);
            }
        }
        for i in 0..self.segments.len() - 1 {
            let gap = self.segments[i].point(1.0).sub(&self.segments[i + 1].point(0.0)).norm();
            if gap > 1e-9 {
                return Err(GeoError::IrregularCurve);
            }
        }
        for seg in &self.segments {
            for k in 0..100 {
                let s = (k as f64 + 0.5) / 100.0;
                if seg.velocity(s).norm() < 1e-12 {
                    return Err(GeoError::IrregularCurve);
                }
            }
        }
        Ok(())
    }
}
