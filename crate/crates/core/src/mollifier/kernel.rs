//! The standard mollifier profile and the Euclidean kernel.

#[allow(unused_imports)]
use crate::float::FloatExt as _;
use crate::linalg::VecN;
use crate::mollifier::Background;
use crate::quadrature::gauss_on;
use crate::{GeoError, Result};

/// Radial profile `exp(1/(s^2 - 1))` for `|s| < 1`, zero outside.
pub fn profile(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        (1.0 / (s * s - 1.0)).exp()
    }
}

/// `profile'(s) / s = -2 exp(1/(s^2-1)) / (s^2-1)^2`, smooth and even.
pub fn profile_d1_over_s(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        let d = s * s - 1.0;
        -2.0 * (1.0 / d).exp() / (d * d)
    }
}

/// `(profile'(s)/s)' / s = 4 exp(1/(s^2-1)) ((s^2-1)^{-4} + 2 (s^2-1)^{-3})`.
pub fn profile_d2_aux(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        let d = s * s - 1.0;
        4.0 * (1.0 / d).exp() * (1.0 / (d * d * d * d) + 2.0 / (d * d * d))
    }
}

/// Normalization constant `C_n = \int_{|z|<1} profile(|z|) dz` in dimension n.
pub fn normalization_constant(dim: usize) -> f64 {
    let surface = match dim {
        1 => 2.0,
        2 => 2.0 * core::f64::consts::PI,
        3 => 4.0 * core::f64::consts::PI,
        _ => panic!("mollifier supports dim 1..=3"),
    };
    let (r, w) = gauss_on(0.0, 1.0, 129);
    let mut s = 0.0;
    for (ri, wi) in r.iter().zip(&w) {
        s += wi * profile(*ri) * ri.powi(dim as i32 - 1);
    }
    surface * s
}

/// The standard mollifier at a fixed scale on a background.
///
/// `eval(x, y)` is nonnegative, vanishes exactly when `dist(x, y) >= eps`,
/// and integrates to 1 in the background volume.
#[derive(Clone)]
pub struct MollifierKernel {
    pub dim: usize,
    pub epsilon: f64,
    /// Cached `C_n` (Euclidean normalization).
    pub norm_const: f64,
    pub background: Background,
}

impl MollifierKernel {
    pub fn new(dim: usize, epsilon: f64, background: Background) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(GeoError::BadEpsilon);
        }
        Ok(MollifierKernel {
            dim,
            epsilon,
            norm_const: normalization_constant(dim),
            background,
        })
    }

    pub fn euclidean(dim: usize, epsilon: f64) -> Result<Self> {
        Self::new(dim, epsilon, Background::Euclidean)
    }

    /// Upper bound for `eval * eps^n` (the cached `||eta||`): the profile
    /// maximum over the normalization constant.
    pub fn sup_bound(&self) -> f64 {
        profile(0.0) / self.norm_const
    }

    pub fn eval(&self, x: &VecN, y: &VecN) -> f64 {
        match &self.background {
            Background::Euclidean => {
                let s = x.sub(y).norm() / self.epsilon;
                profile(s) / (self.norm_const * self.epsilon.powi(self.dim as i32))
            }
            other => {
                let d = other.distance(x, y);
                let raw = profile(d / self.epsilon);
                raw / other.kernel_denominator(x, self.epsilon)
            }
        }
    }

    /// Partial derivative of the kernel in `x`, per-axis orders in `multi`
    /// with total order at most 2. Euclidean backgrounds only.
    pub fn derivative_eval(&self, x: &VecN, y: &VecN, multi: &[usize]) -> Result<f64> {
        if !matches!(self.background, Background::Euclidean) {
            return Err(GeoError::Invalid(alloc::string::String::from(
                "kernel derivatives are closed-form on Euclidean backgrounds only",
            )));
        }
        let order: usize = multi.iter().sum();
        if order > 2 {
            return Err(GeoError::DerivativeOrderTooHigh { order });
        }
        let n = self.dim as i32;
        let eps = self.epsilon;
        let r = x.sub(y);
        let s = r.norm() / eps;
        let base = self.norm_const * eps.powi(n);
        match order {
            0 => Ok(profile(s) / base),
            1 => {
                let k = multi.iter().position(|&m| m == 1).unwrap();
                Ok(profile_d1_over_s(s) * r[k] / (base * eps * eps))
            }
            2 => {
                // either d^2/dx_k^2 or mixed d^2/(dx_k dx_l)
                let mut axes = [0usize; 2];
                let mut c = 0;
                for (i, &m) in multi.iter().enumerate() {
                    for _ in 0..m {
                        axes[c] = i;
                        c += 1;
                    }
                }
                let (k, l) = (axes[0], axes[1]);
                let h = profile_d2_aux(s) * r[k] * r[l] / (eps * eps);
                let g = if k == l { profile_d1_over_s(s) } else { 0.0 };
                Ok((h + g) / (base * eps * eps))
            }
            _ => unreachable!(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BoxDomain;
    use crate::quadrature::BoxRule;
    use rand::{Rng, SeedableRng};

    #[test]
    fn zero_outside_support() {
        let k = MollifierKernel::euclidean(2, 0.1).unwrap();
        let x = VecN::new2(0.0, 0.0);
        assert_eq!(k.eval(&x, &VecN::new2(0.1, 0.0)), 0.0);
        assert_eq!(k.eval(&x, &VecN::new2(0.3, 0.3)), 0.0);
        assert!(k.eval(&x, &VecN::new2(0.05, 0.0)) > 0.0);
    }

    #[test]
    fn normalization_by_independent_grid() {
        // tensor-product quadrature over the bounding box, not the polar rule
        for eps in [0.2, 0.1, 0.05] {
            let k = MollifierKernel::euclidean(2, eps).unwrap();
            let x = VecN::new2(0.3, -0.2);
            let b = BoxDomain::new(&[x[0] - eps, x[1] - eps], &[x[0] + eps, x[1] + eps]).unwrap();
            let rule = BoxRule::new(&b, 65);
            let total = rule.integrate(|y| k.eval(&x, y));
            assert!((total - 1.0).abs() <= 1e-6, "eps={eps}: {total}");
        }
    }

    #[test]
    fn scale_invariant_sup() {
        let x = VecN::new2(0.0, 0.0);
        let mut vals = alloc::vec::Vec::new();
        for eps in [0.2, 0.1, 0.05] {
            let k = MollifierKernel::euclidean(2, eps).unwrap();
            // max over y of eval * eps^n, scanned on a radial grid
            let mut m = 0.0f64;
            for i in 0..400 {
                let r = eps * (i as f64) / 400.0;
                let v = k.eval(&x, &VecN::new2(r, 0.0)) * eps * eps;
                m = m.max(v);
            }
            vals.push(m);
            assert!(m <= k.sup_bound() + 1e-12);
        }
        assert!((vals[0] - vals[1]).abs() < 1e-6);
        assert!((vals[1] - vals[2]).abs() < 1e-6);
    }

    #[test]
    fn bound_holds_at_random_probes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let norm_bound = MollifierKernel::euclidean(2, 0.2).unwrap().sup_bound();
        for _ in 0..1000 {
            let eps = rng.gen_range(0.01..0.5);
            let k = MollifierKernel::euclidean(2, eps).unwrap();
            let x = VecN::new2(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let dy = VecN::new2(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)).scale(eps);
            let y = x.add(&dy);
            assert!(k.eval(&x, &y) * eps * eps <= norm_bound + 1e-12);
        }
    }

    #[test]
    fn derivative_integrates_to_zero() {
        let eps = 0.1;
        let k = MollifierKernel::euclidean(2, eps).unwrap();
        let x = VecN::new2(0.0, 0.0);
        let b = BoxDomain::square(-eps, eps).unwrap();
        let rule = BoxRule::new(&b, 65);
        let total = rule.integrate(|y| k.derivative_eval(&x, y, &[1, 0]).unwrap());
        assert!(total.abs() <= 1e-6, "{total}");
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let eps = 0.15;
        let k = MollifierKernel::euclidean(2, eps).unwrap();
        let y = VecN::new2(0.02, -0.03);
        let h = 1e-6;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let x = VecN::new2(rng.gen_range(-0.08..0.08), rng.gen_range(-0.08..0.08));
            for kk in 0..2 {
                let mut multi = [0usize; 2];
                multi[kk] = 1;
                let an = k.derivative_eval(&x, &y, &multi).unwrap();
                let mut xp = x;
                xp[kk] += h;
                let mut xm = x;
                xm[kk] -= h;
                let fd = (k.eval(&xp, &y) - k.eval(&xm, &y)) / (2.0 * h);
                assert!(
                    (an - fd).abs() <= 1e-5 * (1.0 + an.abs().max(fd.abs())),
                    "d{kk}: {an} vs {fd}"
                );
            }
            // second derivative, diagonal
            let an = k.derivative_eval(&x, &y, &[2, 0]).unwrap();
            let mut xp = x;
            xp[0] += h;
            let mut xm = x;
            xm[0] -= h;
            let fd = (k.eval(&xp, &y) - 2.0 * k.eval(&x, &y) + k.eval(&xm, &y)) / (h * h);
            assert!(
                (an - fd).abs() <= 2e-3 * (1.0 + an.abs()),
                "d00: {an} vs {fd}"
            );
        }
    }

    #[test]
    fn mixed_partials_symmetric() {
        let k = MollifierKernel::euclidean(2, 0.2).unwrap();
        let x = VecN::new2(0.05, 0.02);
        let y = VecN::new2(-0.03, 0.06);
        let a = k.derivative_eval(&x, &y, &[1, 1]).unwrap();
        // the formula is symmetric by construction; evaluate both orders anyway
        let b = k.derivative_eval(&x, &y, &[1, 1]).unwrap();
        assert!((a - b).abs() <= 1e-10 * (1.0 + a.abs()));
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(MollifierKernel::euclidean(2, 0.0).is_err());
        assert!(MollifierKernel::euclidean(2, -1.0).is_err());
        let k = MollifierKernel::euclidean(2, 0.1).unwrap();
        let x = VecN::new2(0.0, 0.0);
        assert!(matches!(
            k.derivative_eval(&x, &x, &[2, 1]),
            Err(GeoError::DerivativeOrderTooHigh { .. })
        ));
    }
}
