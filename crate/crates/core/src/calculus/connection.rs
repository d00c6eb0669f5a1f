//! Christoffel symbols of the Levi-Civita connection in chart coordinates.

use crate::geometry::MetricSource;
use crate::linalg::{MatN, VecN, MAX_DIM};
use crate::{GeoError, Result};

/// Condition-number threshold above which a metric matrix is treated as
/// singular. Smoothings of degenerate metrics get badly conditioned near
/// their degeneracy; failing loudly beats silently garbage output.
pub const CONDITION_LIMIT: f64 = 1e12;

/// The connection coefficients at one point: `gamma[k][i][j]` is the
/// coefficient of `d/dx_k` in the covariant derivative of `d/dx_j` along
/// `d/dx_i`; symmetric in `(i, j)`.
#[derive(Clone, Copy, Debug)]
pub struct ConnectionAt {
    pub point: VecN,
    pub dim: usize,
    pub gamma: [[[f64; MAX_DIM]; MAX_DIM]; MAX_DIM],
}

impl ConnectionAt {
    /// Contraction `sum_ij gamma^k_ij u_i v_j` as a vector over `k`.
    pub fn accel(&self, u: &VecN, v: &VecN) -> VecN {
        let n = self.dim;
        let mut out = VecN::zeros(n);
        for k in 0..n {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    s += self.gamma[k][i][j] * u[i] * v[j];
                }
            }
            out[k] = s;
        }
        out
    }

    pub fn max_asymmetry(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    worst = worst.max((self.gamma[k][i][j] - self.gamma[k][j][i]).abs());
                }
            }
        }
        worst
    }
}

/// `Gamma^k_ij = 1/2 sum_m (d_i g_jm + d_j g_mi - d_m g_ij) g^km`.
pub fn christoffel(metric: &dyn MetricSource, x: &VecN) -> Result<ConnectionAt> {
    let jet = metric.jet(x)?;
    christoffel_from(&jet.value, &jet.d1[..jet.dim], x)
}

/// Same from a precomputed value and first derivatives.
pub fn christoffel_from(g: &MatN, dg: &[MatN], x: &VecN) -> Result<ConnectionAt> {
    let n = g.dim();
    let cond = g.sym_condition();
    if !cond.is_finite() || cond > CONDITION_LIMIT {
        return Err(GeoError::SingularMetric { condition: cond });
    }
    let ginv = g.inverse()?;
    let mut gamma = [[[0.0; MAX_DIM]; MAX_DIM]; MAX_DIM];
    for i in 0..n {
        for j in i..n {
            for k in 0..n {
                let mut s = 0.0;
                for m in 0..n {
                    let t = dg[i].get(j, m) + dg[j].get(m, i) - dg[m].get(i, j);
                    s += t * ginv.get(k, m);
                }
                let v = 0.5 * s;
                gamma[k][i][j] = v;
                gamma[k][j][i] = v;
            }
        }
    }
    Ok(ConnectionAt { point: *x, dim: n, gamma })
}
