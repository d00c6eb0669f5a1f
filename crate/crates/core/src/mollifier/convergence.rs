//! Error tables for the smoothed family against its source.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use crate::float::FloatExt as _;
use crate::geometry::{
    c0_norm, lp_norm, BoxDomain, ConstField, CoveringP, DiffField, MetricField, NormParams,
    Regularity, SymField,
};
use crate::linalg::{MatN, VecN};
use crate::mollifier::{smooth_wrt_p, SmoothParams};
use crate::{GeoError, Result};

/// Which convergence statement is being measured.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ConvergenceMode {
    /// Pointwise error at sampled points (almost-everywhere convergence).
    Ae { samples: usize },
    /// Sup-norm error over the region.
    C0Loc,
    /// L^p-norm error over the region.
    LpLoc(f64),
}

#[derive(Clone, Copy, Debug)]
pub struct ConvergenceRow {
    pub epsilon: f64,
    pub error: f64,
}

#[derive(Clone, Debug)]
pub struct ConvergenceTable {
    pub mode: ConvergenceMode,
    pub rows: Vec<ConvergenceRow>,
    pub warnings: Vec<String>,
}

impl ConvergenceTable {
    /// True when errors decrease monotonically down to `floor` (entries at
    /// or below the floor are not required to keep decreasing).
    pub fn is_decreasing(&self, floor: f64) -> bool {
        self.rows.windows(2).all(|w| {
            w[1].error <= w[0].error || (w[0].error <= floor && w[1].error <= floor)
        })
    }
}

fn halton(i: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let mut n = i + 1;
    while n > 0 {
        f /= base as f64;
        r += f * (n % base) as f64;
        n /= base;
    }
    r
}

fn sample_points(region: &BoxDomain, count: usize) -> Vec<VecN> {
    let dim = region.dim();
    let bases = [2usize, 3, 5, 7];
    (0..count)
        .map(|i| {
            let mut p = VecN::zeros(dim);
            for k in 0..dim {
                p[k] = region.lo(k) + halton(i, bases[k]) * region.extent(k);
            }
            p
        })
        .collect()
}

/// Smooth `source` with respect to the covering at each epsilon and report
/// the error against the source in the requested mode. A regularity
/// mismatch is reported as a warning, not an error: the convergence
/// hypotheses are the caller's responsibility.
pub fn convergence_report(
    source: &MetricField,
    covering: &CoveringP,
    mode: ConvergenceMode,
    epsilons: &[f64],
    region: &BoxDomain,
    smooth_params: SmoothParams,
    norm_params: NormParams,
) -> Result<ConvergenceTable> {
    if epsilons.is_empty() {
        return Err(GeoError::EmptyEpsilonList);
    }
    let mut warnings = Vec::new();
    match (mode, source.regularity) {
        (ConvergenceMode::C0Loc, Regularity::LpLoc(_) | Regularity::Measurable) => {
            warnings.push(String::from(
                "C0 convergence requested for a field that is not declared continuous",
            ));
        }
        (ConvergenceMode::LpLoc(p), Regularity::LpLoc(q)) if q < p => {
            warnings.push(format!(
                "L^{p} convergence requested but the field is only declared L^{q}"
            ));
        }
        (ConvergenceMode::LpLoc(_) | ConvergenceMode::Ae { .. }, Regularity::Measurable) => {
            warnings.push(String::from(
                "field is only declared measurable; local summability is assumed",
            ));
        }
        _ => {}
    }

    let bg = ConstField(MatN::identity(source.dim()));
    let mut rows = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let smoothed = smooth_wrt_p(source, covering, eps, smooth_params)?;
        let error = match mode {
            ConvergenceMode::Ae { samples } => {
                let mut worst = 0.0f64;
                for p in sample_points(region, samples) {
                    // skip points where the source is genuinely undefined
                    let (Some(a), Some(b)) = (smoothed.eval(&p), SymField::eval(source, &p))
                    else {
                        continue;
                    };
                    worst = worst.max(a.sub(&b).max_abs());
                }
                worst
            }
            ConvergenceMode::C0Loc => {
                let diff = DiffField { a: &smoothed, b: source };
                c0_norm(&diff, region, &bg, norm_params)?
            }
            ConvergenceMode::LpLoc(p) => {
                let diff = DiffField { a: &smoothed, b: source };
                lp_norm(&diff, region, p, &bg, norm_params)?
            }
        };
        rows.push(ConvergenceRow { epsilon: eps, error });
    }
    Ok(ConvergenceTable { mode, rows, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_covering, Chart, UndefinedSet};

    fn covering_on_unit_square() -> CoveringP {
        let dom = BoxDomain::square(-0.5, 0.5).unwrap();
        build_covering(&dom, 0.5, 0.1).unwrap()
    }

    fn chart() -> Chart {
        Chart::new("t", BoxDomain::square(-1.0, 1.0).unwrap())
    }

    #[test]
    fn continuous_metric_c0_errors_decrease() {
        let f = MetricField::new(chart(), Regularity::C0, UndefinedSet::empty(), |x| {
            Some(MatN::diag(&[1.0 + x[0] * x[0], 1.0]))
        });
        let cov = covering_on_unit_square();
        let region = BoxDomain::square(-0.3, 0.3).unwrap();
        let table = convergence_report(
            &f,
            &cov,
            ConvergenceMode::C0Loc,
            &[0.2, 0.1, 0.05],
            &region,
            SmoothParams::coarse(),
            NormParams { nodes_per_axis: 9 },
        )
        .unwrap();
        assert!(table.warnings.is_empty());
        assert!(table.is_decreasing(0.0), "{:?}", table.rows);
        assert!(table.rows[0].error > table.rows[2].error * 2.0);
    }

    #[test]
    fn smooth_constant_field_reports_noise_floor() {
        let f = MetricField::new(chart(), Regularity::Smooth, UndefinedSet::empty(), |_| {
            Some(MatN::diag(&[2.0, 3.0]))
        });
        let cov = covering_on_unit_square();
        let region = BoxDomain::square(-0.3, 0.3).unwrap();
        for mode in [ConvergenceMode::C0Loc, ConvergenceMode::LpLoc(1.0), ConvergenceMode::Ae { samples: 64 }] {
            let table = convergence_report(
                &f,
                &cov,
                mode,
                &[0.2, 0.1],
                &region,
                SmoothParams::coarse(),
                NormParams { nodes_per_axis: 5 },
            )
            .unwrap();
            for row in &table.rows {
                assert!(row.error <= 1e-10, "{mode:?}: {}", row.error);
            }
        }
    }

    #[test]
    fn plateau_pointwise_error_vanishes_for_layered_metric() {
        // almost-everywhere mode on the layered metric: points on plateaus
        // see a locally constant field once the kernel fits inside
        let f = MetricField::new(chart(), Regularity::Measurable, UndefinedSet::empty(), |x| {
            let ax = x[0].abs();
            let k = if ax > 0.0 { (-ax.log2()).floor() as i64 } else { i64::MAX };
            let v = if k.rem_euclid(2) == 0 { 1.0 } else { 2.0 };
            Some(MatN::diag(&[v, v]))
        });
        let cov = covering_on_unit_square();
        // sample region well inside the outermost plateau (1/2, 1) scaled to
        // the covering domain: use x in (0.26, 0.46)
        let region = BoxDomain::new(&[0.26, -0.3], &[0.46, 0.3]).unwrap();
        let table = convergence_report(
            &f,
            &cov,
            ConvergenceMode::Ae { samples: 50 },
            &[0.2, 0.1, 0.05, 0.01],
            &region,
            SmoothParams::coarse(),
            NormParams { nodes_per_axis: 5 },
        )
        .unwrap();
        // warn (not error) about the regularity mismatch
        assert!(!table.warnings.is_empty());
        let last = table.rows.last().unwrap();
        assert!(last.error <= 1e-12, "plateau error {}", last.error);
    }

    #[test]
    fn empty_epsilon_list_rejected() {
        let f = MetricField::new(chart(), Regularity::Smooth, UndefinedSet::empty(), |_| {
            Some(MatN::identity(2))
        });
        let cov = covering_on_unit_square();
        let region = BoxDomain::square(-0.3, 0.3).unwrap();
        assert!(matches!(
            convergence_report(
                &f,
                &cov,
                ConvergenceMode::C0Loc,
                &[],
                &region,
                SmoothParams::coarse(),
                NormParams::default()
            ),
            Err(GeoError::EmptyEpsilonList)
        ));
    }
}
