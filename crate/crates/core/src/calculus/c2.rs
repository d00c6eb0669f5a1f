//! Convergence diagnostics: connection and curvature of the smoothed metric
//! against the original, for twice continuously differentiable sources.

use alloc::vec::Vec;

use crate::calculus::{christoffel, curvature};
#[allow(unused_imports)]
use crate::float::FloatExt as _;
use crate::geometry::{CoveringP, MetricField};
use crate::linalg::VecN;
use crate::mollifier::{smooth_wrt_p, SmoothParams};
use crate::Result;

/// One row of the convergence table.
#[derive(Clone, Copy, Debug)]
pub struct C2Row {
    pub epsilon: f64,
    /// Max over probes and components of the Christoffel difference.
    pub gamma_err: f64,
    /// Max over probes and components of the curvature-tensor difference.
    pub curv_err: f64,
}

/// For each epsilon, compare the connection and curvature of the
/// covering-smoothed metric against those of the source at the probes.
/// The caller asserts the source is C2; the table is a measurement.
pub fn c2_convergence_check(
    source: &MetricField,
    covering: &CoveringP,
    epsilons: &[f64],
    probes: &[VecN],
    params: SmoothParams,
) -> Result<Vec<C2Row>> {
    if epsilons.is_empty() {
        return Err(crate::GeoError::EmptyEpsilonList);
    }
    let mut rows = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let smoothed = smooth_wrt_p(source, covering, eps, params)?;
        let mut gamma_err = 0.0f64;
        let mut curv_err = 0.0f64;
        for p in probes {
            let c_ref = christoffel(source, p)?;
            let c_eps = christoffel(&smoothed, p)?;
            let n = c_ref.dim;
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        gamma_err =
                            gamma_err.max((c_ref.gamma[k][i][j] - c_eps.gamma[k][i][j]).abs());
                    }
                }
            }
            let r_ref = curvature(source, p)?;
            let r_eps = curvature(&smoothed, p)?;
            for l in 0..n {
                for k in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            curv_err = curv_err
                                .max((r_ref.r[l][k][i][j] - r_eps.r[l][k][i][j]).abs());
                        }
                    }
                }
            }
        }
        rows.push(C2Row { epsilon: eps, gamma_err, curv_err });
    }
    Ok(rows)
}
