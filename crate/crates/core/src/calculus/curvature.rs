//! Riemann curvature tensor, Ricci tensor, scalar and Gaussian curvature.

use crate::calculus::connection::CONDITION_LIMIT;
use crate::geometry::MetricSource;
use crate::linalg::{MatN, VecN, MAX_DIM};
use crate::{GeoError, Result};

/// Curvature data at one point. `r[l][k][i][j]` is the coefficient of
/// `d/dx_l` in `R(d/dx_i, d/dx_j) d/dx_k`.
#[derive(Clone, Copy, Debug)]
pub struct CurvatureAt {
    pub point: VecN,
    pub dim: usize,
    pub r: [[[[f64; MAX_DIM]; MAX_DIM]; MAX_DIM]; MAX_DIM],
    pub metric: MatN,
    pub ricci: MatN,
    pub scalar: f64,
    /// `scalar / 2` in dimension 2.
    pub gaussian: Option<f64>,
}

impl CurvatureAt {
    /// `R(u, v) z` as a vector.
    pub fn apply(&self, u: &VecN, v: &VecN, z: &VecN) -> VecN {
        let n = self.dim;
        let mut out = VecN::zeros(n);
        for l in 0..n {
            let mut s = 0.0;
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        s += self.r[l][k][i][j] * z[k] * u[i] * v[j];
                    }
                }
            }
            out[l] = s;
        }
        out
    }

    /// Worst violation of the antisymmetry `R^l_kij = -R^l_kji`.
    pub fn max_antisymmetry_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for l in 0..n {
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        worst = worst.max((self.r[l][k][i][j] + self.r[l][k][j][i]).abs());
                    }
                }
            }
        }
        worst
    }

    /// Worst violation of the first Bianchi identity
    /// `R^l_kij + R^l_ijk + R^l_jki = 0`.
    pub fn max_bianchi_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for l in 0..n {
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let s = self.r[l][k][i][j] + self.r[l][i][j][k] + self.r[l][j][k][i];
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }
}

/// Curvature from the metric jet:
/// `R^l_kij = d_i Gamma^l_jk - d_j Gamma^l_ik + sum_m (Gamma^m_jk Gamma^l_im - Gamma^m_ik Gamma^l_jm)`.
pub fn curvature(metric: &dyn MetricSource, x: &VecN) -> Result<CurvatureAt> {
    let jet = metric.jet(x)?;
    let n = jet.dim;
    let g = jet.value;
    let cond = g.sym_condition();
    if !cond.is_finite() || cond > CONDITION_LIMIT {
        return Err(GeoError::SingularMetric { condition: cond });
    }
    let ginv = g.inverse()?;

    // Gamma and its coordinate derivatives from the jet
    let mut gamma = [[[0.0f64; MAX_DIM]; MAX_DIM]; MAX_DIM];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut s = 0.0;
                for m in 0..n {
                    let t = jet.d1[i].get(j, m) + jet.d1[j].get(m, i) - jet.d1[m].get(i, j);
                    s += t * ginv.get(k, m);
                }
                gamma[k][i][j] = 0.5 * s;
            }
        }
    }
    // d_l g^{-1} = -g^{-1} (d_l g) g^{-1}
    let mut dginv = [MatN::zeros(n); MAX_DIM];
    for l in 0..n {
        dginv[l] = ginv.mul(&jet.d1[l]).mul(&ginv).scale(-1.0);
    }
    // d_l Gamma^k_ij
    let mut dgamma = [[[[0.0f64; MAX_DIM]; MAX_DIM]; MAX_DIM]; MAX_DIM];
    for l in 0..n {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut s = 0.0;
                    for m in 0..n {
                        let t2 = jet.d2[l][i].get(j, m) + jet.d2[l][j].get(m, i)
                            - jet.d2[l][m].get(i, j);
                        let t1 = jet.d1[i].get(j, m) + jet.d1[j].get(m, i) - jet.d1[m].get(i, j);
                        s += t2 * ginv.get(k, m) + t1 * dginv[l].get(k, m);
                    }
                    dgamma[l][k][i][j] = 0.5 * s;
                }
            }
        }
    }

    let mut r = [[[[0.0f64; MAX_DIM]; MAX_DIM]; MAX_DIM]; MAX_DIM];
    for l in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut s = dgamma[i][l][j][k] - dgamma[j][l][i][k];
                    for m in 0..n {
                        s += gamma[m][j][k] * gamma[l][i][m] - gamma[m][i][k] * gamma[l][j][m];
                    }
                    r[l][k][i][j] = s;
                }
            }
        }
    }

    // Ric(a, b) = sum_i R^i_{b i a}
    let ricci = MatN::from_fn(n, |a, b| {
        let mut s = 0.0;
        for i in 0..n {
            s += r[i][b][i][a];
        }
        s
    })
    .symmetrize();
    let mut scalar = 0.0;
    for a in 0..n {
        for b in 0..n {
            scalar += ginv.get(a, b) * ricci.get(a, b);
        }
    }
    let gaussian = if n == 2 { Some(0.5 * scalar) } else { None };
    Ok(CurvatureAt { point: *x, dim: n, r, metric: g, ricci, scalar, gaussian })
}
