//! The Cantor function, the flat-almost-everywhere closed curve built from
//! it, a curvature-dimension estimator, and the associated surface of
//! revolution whose curvature concentrates on a fractal set.

use alloc::sync::Arc;
use alloc::vec::Vec;

#[allow(unused_imports)]
use crate::float::FloatExt as _;
use crate::geometry::{BoxDomain, Chart, MetricField, Regularity, UndefinedSet};
use crate::linalg::{MatN, VecN};
use crate::mollifier::{normalization_constant, profile, profile_d1_over_s, profile_d2_aux};
use crate::quadrature::gauss_on;
use crate::{GeoError, Result};

/// Number of ternary digits extracted; the tail contributes < 2^-60.
const DIGITS: usize = 60;

/// Fixed-point denominator exponent for exact digit extraction. Doubles of
/// an f64 in [0, 1] with exponent >= -76 are represented exactly.
const FIX: u32 = 76;

fn ternary_digits(x: f64) -> [u8; DIGITS] {
    let q: u128 = 1u128 << FIX;
    let mut p = ((x * (q as f64)).round() as u128).min(q);
    let mut digits = [0u8; DIGITS];
    for d in digits.iter_mut() {
        p *= 3;
        *d = (p >> FIX) as u8;
        p &= q - 1;
    }
    digits
}

fn value_from_digits(digits: &[u8; DIGITS]) -> f64 {
    let mut value = 0.0;
    let mut scale = 0.5;
    for &a in digits {
        if a == 1 {
            value += scale;
            return value;
        }
        value += scale * (a as f64 / 2.0);
        scale *= 0.5;
    }
    value
}

/// The monotone continuous Cantor ternary function: with ternary digits
/// `a_i` and `N` the first index with `a_i = 1`, the value is
/// `sum_{i<N} (a_i/2) 2^-i + 2^-N` (the full sum when no digit is 1).
/// Both ternary representations of a point give the same value.
pub fn cantor_function(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(GeoError::Invalid(alloc::format!("Cantor function needs x in [0,1], got {x}")));
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    Ok(value_from_digits(&ternary_digits(x)))
}

/// [`cantor_function`] at the exact rational `num / den`; digit extraction
/// runs in integer arithmetic, so triadic points like 1/3 land exactly on
/// their digit-1 representation.
pub fn cantor_function_rational(num: u64, den: u64) -> Result<f64> {
    if den == 0 || num > den {
        return Err(GeoError::Invalid(alloc::format!(
            "Cantor function needs a rational in [0,1], got {num}/{den}"
        )));
    }
    let mut p = num as u128;
    let q = den as u128;
    let mut digits = [0u8; DIGITS];
    for d in digits.iter_mut() {
        p *= 3;
        *d = (p / q) as u8;
        p %= q;
    }
    Ok(value_from_digits(&digits))
}

/// Distance from `x` to the Cantor ternary set (0 on the set itself).
pub fn distance_to_cantor(x: f64) -> f64 {
    if x <= 0.0 {
        return -x;
    }
    if x >= 1.0 {
        return x - 1.0;
    }
    let digits = ternary_digits(x);
    let mut lo = 0.0f64;
    let mut width = 1.0f64;
    for &a in &digits {
        width /= 3.0;
        match a {
            0 => {}
            1 => {
                // x sits in the removed middle third of the current cell
                let left = lo + width;
                let right = lo + 2.0 * width;
                return (x - left).min(right - x).max(0.0);
            }
            _ => lo += 2.0 * width,
        }
    }
    0.0
}

/// Turning angle of the Cantor curve: `2 pi f_C(4t/3)` up to `t = 3/4`,
/// then `2 pi`.
pub fn cantor_theta(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 0.75 {
        return core::f64::consts::TAU;
    }
    core::f64::consts::TAU * cantor_function(4.0 * t / 3.0).unwrap_or(1.0)
}

/// The closed unit-speed curve with turning profile [`cantor_theta`],
/// sampled by cumulative trapezoid quadrature at resolution `n`.
#[derive(Clone, Debug)]
pub struct CantorCurve {
    pub resolution: usize,
    /// Positions at the grid parameters `i / n`, `i = 0..=n`.
    xs: Arc<Vec<(f64, f64)>>,
}

impl CantorCurve {
    pub fn build(resolution: usize) -> Result<Self> {
        if resolution < (1 << 10) {
            return Err(GeoError::Invalid(alloc::format!(
                "Cantor curve needs resolution >= 2^10, got {resolution}"
            )));
        }
        let n = resolution;
        let mut xs = Vec::with_capacity(n + 1);
        let mut x = 0.0f64;
        let mut y = 0.0f64;
        xs.push((x, y));
        let h = 1.0 / n as f64;
        let (mut sp, mut cp) = (0.0, 1.0); // sin/cos at t = 0
        for i in 1..=n {
            let t = i as f64 * h;
            let (s, c) = cantor_theta(t).sin_cos();
            x += 0.5 * h * (cp + c);
            y += 0.5 * h * (sp + s);
            sp = s;
            cp = c;
            xs.push((x, y));
        }
        Ok(CantorCurve { resolution, xs: Arc::new(xs) })
    }

    pub fn point(&self, t: f64) -> (f64, f64) {
        let n = self.resolution;
        let u = (t.clamp(0.0, 1.0)) * n as f64;
        let i = (u.floor() as usize).min(n - 1);
        let frac = u - i as f64;
        let (x0, y0) = self.xs[i];
        let (x1, y1) = self.xs[i + 1];
        (x0 + frac * (x1 - x0), y0 + frac * (y1 - y0))
    }

    /// Gap between the endpoint and the start; small when the curve closes.
    pub fn closure_defect(&self) -> f64 {
        let (x, y) = *self.xs.last().unwrap();
        let (x0, y0) = self.xs[0];
        ((x - x0) * (x - x0) + (y - y0) * (y - y0)).sqrt()
    }

    /// Center of mass in the arclength-uniform measure.
    pub fn center_of_mass(&self) -> (f64, f64) {
        let n = self.resolution;
        let mut sx = 0.0;
        let mut sy = 0.0;
        for i in 0..n {
            let (x0, y0) = self.xs[i];
            let (x1, y1) = self.xs[i + 1];
            sx += 0.5 * (x0 + x1);
            sy += 0.5 * (y0 + y1);
        }
        (sx / n as f64, sy / n as f64)
    }

    /// Polygonal length at the build resolution (the parametrization is
    /// unit-speed, so this should match the parameter length).
    pub fn polygonal_length(&self) -> f64 {
        let mut len = 0.0;
        for w in self.xs.windows(2) {
            let (x0, y0) = w[0];
            let (x1, y1) = w[1];
            len += ((x1 - x0) * (x1 - x0) + (y1 - y0) * (y1 - y0)).sqrt();
        }
        len
    }

    /// Whether `t` maps into the Cantor set of the turning profile.
    pub fn is_cantor_param(&self, t: f64) -> bool {
        let x = 4.0 * t / 3.0;
        (0.0..=1.0).contains(&x) && distance_to_cantor(x) == 0.0
    }
}

/// Outcome of the curvature-dimension slope fit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DimensionEstimate {
    /// Fitted slope of `log (theta(t) - theta(s))` against `log (t - s)`.
    Slope(f64),
    /// The turning profile is locally constant: a flat point.
    Flat,
}

/// Estimate the curvature dimension of a turning profile at `p` from
/// symmetric windows shrinking geometrically (default ladder base 3).
pub fn curvature_dimension(
    theta: &dyn Fn(f64) -> f64,
    p: f64,
    windows: &[f64],
) -> DimensionEstimate {
    let mut pts = Vec::new();
    for &w in windows {
        let dth = (theta(p + w) - theta(p - w)).abs();
        if dth > 1e-13 {
            pts.push(((2.0 * w).ln(), dth.ln()));
        }
    }
    if pts.len() < 2 {
        return DimensionEstimate::Flat;
    }
    // least-squares slope
    let n = pts.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for (x, y) in &pts {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    DimensionEstimate::Slope((n * sxy - sx * sy) / (n * sxx - sx * sx))
}

/// Default window ladder for the dimension estimator.
pub fn default_windows() -> Vec<f64> {
    let mut w = 1e-2;
    let mut out = Vec::new();
    for _ in 0..9 {
        out.push(w);
        w /= 3.0;
    }
    out
}

/// The surface of revolution of the centered Cantor curve around the
/// vertical axis: `ds^2 = dt^2 + rho(t)^2 dphi^2` with `rho` the distance
/// to the axis along the positive half of the profile.
#[derive(Clone)]
pub struct CantorSphere {
    pub curve: CantorCurve,
    /// Profile parameter range between the axis crossings (the poles).
    pub t_poles: (f64, f64),
    com: (f64, f64),
    /// Which side of the axis the profile arc lies on; the curve is
    /// symmetric, so either side generates the same surface.
    side: f64,
}

impl CantorSphere {
    pub fn build(resolution: usize) -> Result<Self> {
        let curve = CantorCurve::build(resolution)?;
        let com = curve.center_of_mass();
        // axis crossings of the centered x-coordinate
        let n = curve.resolution;
        let xc = |i: usize| curve.xs[i].0 - com.0;
        let mut crossings = Vec::new();
        for i in 0..n {
            let (a, b) = (xc(i), xc(i + 1));
            if a == 0.0 || a * b < 0.0 {
                let frac = if a == 0.0 { 0.0 } else { a / (a - b) };
                crossings.push((i as f64 + frac) / n as f64);
            }
        }
        if crossings.len() != 2 {
            return Err(GeoError::Invalid(alloc::format!(
                "expected 2 axis crossings, found {}",
                crossings.len()
            )));
        }
        let (ta, tb) = (crossings[0], crossings[1]);
        let mid = 0.5 * (ta + tb);
        let xmid = curve.point(mid).0 - com.0;
        if xmid.abs() < 1e-6 {
            return Err(GeoError::Invalid(alloc::string::String::from(
                "profile arc degenerates onto the rotation axis",
            )));
        }
        let sphere = CantorSphere { curve, t_poles: (ta, tb), com, side: xmid.signum() };
        // rho must be nonnegative along the whole arc
        for k in 1..400 {
            let t = ta + (tb - ta) * k as f64 / 400.0;
            if sphere.rho(t) < -1e-9 {
                return Err(GeoError::Invalid(alloc::string::String::from(
                    "profile dips below the rotation axis",
                )));
            }
        }
        Ok(sphere)
    }

    /// Distance of the profile point to the rotation axis.
    pub fn rho(&self, t: f64) -> f64 {
        self.side * (self.curve.point(t).0 - self.com.0)
    }

    /// Gaussian curvature `-rho'' / rho` where the profile is twice
    /// differentiable, i.e. on the flat plateaus (where it is 0); `None`
    /// on the Cantor orbit.
    pub fn gaussian_curvature(&self, t: f64) -> Option<f64> {
        let x = 4.0 * t / 3.0;
        if !(0.0..=1.0).contains(&x) {
            return Some(0.0); // the closing straight stretch
        }
        if distance_to_cantor(x) > 0.0 {
            Some(0.0)
        } else {
            None
        }
    }

    /// Parameter-space distance of `t` to the curvature support (the
    /// Cantor orbit of the turning profile).
    pub fn orbit_distance(&self, t: f64) -> f64 {
        let x = 4.0 * t / 3.0;
        if x <= 1.0 {
            distance_to_cantor(x) * 0.75
        } else {
            (x - 1.0) * 0.75
        }
    }

    /// Mollified turning angle and its first two derivatives, by 1D kernel
    /// quadrature against the exact profile.
    pub fn theta_smoothed(&self, t: f64, eps: f64) -> (f64, f64, f64) {
        let c1 = normalization_constant(1);
        let (us, ws) = gauss_on(-1.0, 1.0, 48);
        let th0 = cantor_theta(t);
        let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
        for (u, w) in us.iter().zip(&ws) {
            let dth = cantor_theta(t + eps * u) - th0;
            v += w * profile(*u) * dth;
            d1 += w * (-profile_d1_over_s(*u) * u) * dth;
            d2 += w * (profile_d2_aux(*u) * u * u + profile_d1_over_s(*u)) * dth;
        }
        (th0 + v / c1, d1 / (c1 * eps), d2 / (c1 * eps * eps))
    }

    /// Smoothed profile radius and derivatives at `t`: integrates
    /// `cos theta_eps` from the pole.
    fn rho_smoothed_d(&self, t: f64, eps: f64) -> (f64, f64) {
        let (th, dth, _) = self.theta_smoothed(t, eps);
        // the tangent angle theta is measured against the x-axis and rho is
        // the (signed-corrected) x-distance, so rho' = side * cos(theta)
        (self.side * th.cos(), -self.side * th.sin() * dth)
    }

    /// Total curvature of the smoothed revolution surface: the band
    /// integrals of `K dV` telescope to `2 pi (rho'(pole_a) - rho'(pole_b))`
    /// in the profile derivative, with the pole values extrapolated across
    /// the collar (the poles themselves are numerically unstable). The
    /// result lands on `4 pi` exactly to the extent the profile genuinely
    /// meets the axis perpendicularly.
    pub fn total_curvature_smoothed(&self, eps: f64, collar: f64) -> f64 {
        let (ta, tb) = self.t_poles;
        let ext = |pole: f64, sign: f64| {
            let p1 = self.rho_smoothed_d(pole + sign * collar, eps).0;
            let p2 = self.rho_smoothed_d(pole + sign * 2.0 * collar, eps).0;
            2.0 * p1 - p2
        };
        let rho_a = ext(ta, 1.0);
        let rho_b = ext(tb, -1.0);
        core::f64::consts::TAU * (rho_a - rho_b)
    }

    /// Fraction of the total absolute curvature carried by points farther
    /// than `delta` (in profile parameter) from the Cantor orbit.
    pub fn off_orbit_mass_fraction(&self, eps: f64, collar: f64, delta: f64) -> f64 {
        let (ta, tb) = self.t_poles;
        let (a, b) = (ta + collar, tb - collar);
        let nseg = (((b - a) / (0.25 * eps)).ceil() as usize).clamp(200, 250_000);
        let h = (b - a) / nseg as f64;
        let mut total = 0.0;
        let mut off = 0.0;
        let mut prev = self.rho_smoothed_d(a, eps).0;
        for i in 1..=nseg {
            let t = a + i as f64 * h;
            let cur = self.rho_smoothed_d(t, eps).0;
            let mass = (cur - prev).abs();
            total += mass;
            if self.orbit_distance(t - 0.5 * h) > delta {
                off += mass;
            }
            prev = cur;
        }
        if total == 0.0 {
            0.0
        } else {
            off / total
        }
    }

    /// The revolution metric `diag(1, rho(t)^2)` as a field on the collared
    /// `(t, phi)` chart, for use with the generic smoothing machinery.
    pub fn metric_field(&self, collar: f64) -> Result<MetricField> {
        let (ta, tb) = self.t_poles;
        let me = self.clone();
        let chart = Chart::new(
            "cantor-sphere",
            BoxDomain::new(&[ta + collar, -1.0], &[tb - collar, 7.3])?,
        );
        Ok(MetricField::new(chart, Regularity::C0, UndefinedSet::empty(), move |x: &VecN| {
            let r = me.rho(x[0]);
            Some(MatN::diag(&[1.0, (r * r).max(1e-30)]))
        }))
    }
}
