//! Numerical C0 and L^p norms for symmetric (0,2) tensor fields.
//!
//! For a symmetric bilinear form the supremum of `|T(v,w)|` over
//! background-unit vectors equals the largest absolute eigenvalue of the
//! background-whitened matrix, which is what these functionals evaluate.

#[allow(unused_imports)]
use crate::float::FloatExt as _;
use crate::geometry::{BoxDomain, SymField};
use crate::linalg::{whitened_opnorm, VecN};
use crate::quadrature::BoxRule;
use crate::{GeoError, Result};

/// Grid resolution for the norm functionals.
#[derive(Clone, Copy, Debug)]
pub struct NormParams {
    /// Gauss nodes per axis.
    pub nodes_per_axis: usize,
}

impl Default for NormParams {
    fn default() -> Self {
        NormParams { nodes_per_axis: 33 }
    }
}

/// Operator norm of `t` at `x` over `background`-unit vectors.
pub fn pointwise_opnorm(t: &dyn SymField, x: &VecN, background: &dyn SymField) -> Result<f64> {
    let tm = t.eval(x).ok_or(GeoError::UndefinedAt {
        x: x[0],
        y: if x.dim() > 1 { x[1] } else { 0.0 },
    })?;
    let bg = background.eval(x).ok_or(GeoError::OutsideChart)?;
    whitened_opnorm(&tm, &bg)
}

/// Sup of the pointwise operator norm over a quadrature grid on `region`.
pub fn c0_norm(
    t: &dyn SymField,
    region: &BoxDomain,
    background: &dyn SymField,
    params: NormParams,
) -> Result<f64> {
    let rule = BoxRule::new(region, params.nodes_per_axis);
    let mut sup = 0.0f64;
    for p in &rule.nodes {
        sup = sup.max(pointwise_opnorm(t, p, background)?);
    }
    Ok(sup)
}

/// `( \int |T|_op^p dV_background )^(1/p)` over `region` by grid quadrature.
pub fn lp_norm(
    t: &dyn SymField,
    region: &BoxDomain,
    p: f64,
    background: &dyn SymField,
    params: NormParams,
) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(GeoError::BadExponent { p });
    }
    let rule = BoxRule::new(region, params.nodes_per_axis);
    let mut acc = 0.0;
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let v = pointwise_opnorm(t, x, background)?;
        let bg = background.eval(x).ok_or(GeoError::OutsideChart)?;
        let vol = bg.det().max(0.0).sqrt();
        acc += w * v.powf(p) * vol;
    }
    Ok(acc.powf(1.0 / p))
}
