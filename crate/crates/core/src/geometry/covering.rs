//! Locally finite coverings by overlapping boxes with a smooth partition of
//! unity, each chart carrying its own Euclidean background.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use crate::float::FloatExt as _;
use crate::geometry::BoxDomain;
use crate::linalg::VecN;
use crate::{GeoError, Result};

/// `exp(-1/u)` clamped to zero for `u <= 0`, with derivatives.
fn phi(u: f64) -> (f64, f64, f64) {
    if u <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let v = (-1.0 / u).exp();
    let d1 = v / (u * u);
    let d2 = v * (1.0 / (u * u * u * u) - 2.0 / (u * u * u));
    (v, d1, d2)
}

/// Smoothstep `S(u) = phi(u) / (phi(u) + phi(1-u))`.
///
/// `S(u) + S(1-u) = 1` identically, which makes the partition of unity sum
/// to one exactly (up to rounding) in the overlap zones.
fn smoothstep(u: f64) -> (f64, f64, f64) {
    if u <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    if u >= 1.0 {
        return (1.0, 0.0, 0.0);
    }
    let (f, f1, f2) = phi(u);
    let (g, g1n, g2) = phi(1.0 - u);
    let g1 = -g1n; // d/du phi(1-u)
    let n = f + g;
    let n1 = f1 + g1;
    let n2 = f2 + g2;
    let s = f / n;
    let s1 = (f1 * n - f * n1) / (n * n);
    let s2 = f2 / n - (2.0 * f1 * n1 + f * n2) / (n * n) + 2.0 * f * n1 * n1 / (n * n * n);
    (s, s1, s2)
}

/// One-dimensional bump: 1 on the core, smoothstep ramps of the given width
/// on the sides that face a neighboring cell.
#[derive(Clone, Copy, Debug)]
struct Bump1d {
    support_lo: f64,
    support_hi: f64,
    ramp_width: f64,
    has_lo_ramp: bool,
    has_hi_ramp: bool,
}

impl Bump1d {
    /// Value and first two derivatives at `x`.
    fn eval(&self, x: f64) -> (f64, f64, f64) {
        if x <= self.support_lo || x >= self.support_hi {
            // outside an un-ramped side the bump is still 1 on the closed
            // domain boundary; callers only evaluate inside the domain
            if !self.has_lo_ramp && x <= self.support_lo {
                return (1.0, 0.0, 0.0);
            }
            if !self.has_hi_ramp && x >= self.support_hi {
                return (1.0, 0.0, 0.0);
            }
            return (0.0, 0.0, 0.0);
        }
        let w = self.ramp_width;
        let (mut v, mut d1, mut d2) = (1.0, 0.0, 0.0);
        if self.has_lo_ramp && x < self.support_lo + w {
            let (s, s1, s2) = smoothstep((x - self.support_lo) / w);
            v = s;
            d1 = s1 / w;
            d2 = s2 / (w * w);
        }
        if self.has_hi_ramp && x > self.support_hi - w {
            let (s, s1, s2) = smoothstep((self.support_hi - x) / w);
            // ramps never overlap (overlap <= cell/2), so at most one is active
            v = s;
            d1 = -s1 / w;
            d2 = s2 / (w * w);
        }
        (v, d1, d2)
    }
}

/// One chart of a covering: support box of the bump (`inner`), the larger
/// box the smoothing integral may read from (`outer`), and the scale of the
/// chart's Euclidean background.
#[derive(Clone, Debug)]
pub struct CoveringChart {
    pub inner: BoxDomain,
    pub outer: BoxDomain,
    /// Background is `scale^2 *` (identity); chosen so the unit fattening of
    /// `inner` in background units stays compactly inside `outer`.
    pub background_scale: f64,
    bumps: Vec<Bump1d>,
}

impl CoveringChart {
    /// Euclidean gap between the bump support and the outer box: the hard
    /// upper bound for smoothing radii on this chart.
    pub fn margin(&self) -> f64 {
        self.inner.margin_within(&self.outer)
    }
}

/// A box tiling with overlapping supports and a smooth partition of unity.
#[derive(Clone, Debug)]
pub struct CoveringP {
    pub domain: BoxDomain,
    pub cell_size: f64,
    pub overlap: f64,
    charts: Vec<CoveringChart>,
}

/// Margin used by [`build_covering`]: generous enough for the default
/// epsilon ladders.
const DEFAULT_MARGIN: f64 = 0.25;

/// Tile `domain` with cells of (at most) `cell_size`, fattened by `overlap`
/// into overlapping bump supports. Outer boxes extend a further
/// `max(overlap, 0.25)` beyond the supports.
pub fn build_covering(domain: &BoxDomain, cell_size: f64, overlap: f64) -> Result<CoveringP> {
    build_covering_with_margin(domain, cell_size, overlap, DEFAULT_MARGIN.max(overlap))
}

/// As [`build_covering`] with an explicit support-to-outer margin.
pub fn build_covering_with_margin(
    domain: &BoxDomain,
    cell_size: f64,
    overlap: f64,
    margin: f64,
) -> Result<CoveringP> {
    if !(cell_size > 0.0) || !(overlap > 0.0) || overlap >= cell_size {
        return Err(GeoError::BadCoveringParams { cell_size, overlap });
    }
    let dim = domain.dim();
    let mut counts = vec![0usize; dim];
    let mut widths = vec![0.0f64; dim];
    for k in 0..dim {
        let c = (domain.extent(k) / cell_size).ceil().max(1.0) as usize;
        counts[k] = c;
        widths[k] = domain.extent(k) / c as f64;
        if counts[k] > 1 && overlap > 0.5 * widths[k] {
            // ramps of non-adjacent cells would overlap and the partition
            // would no longer telescope to 1
            return Err(GeoError::BadCoveringParams { cell_size: widths[k], overlap });
        }
    }

    let mut charts = Vec::new();
    let mut idx = vec![0usize; dim];
    loop {
        let mut lo = vec![0.0; dim];
        let mut hi = vec![0.0; dim];
        let mut bumps = Vec::with_capacity(dim);
        for k in 0..dim {
            let a = domain.lo(k) + idx[k] as f64 * widths[k];
            let b = a + widths[k];
            let first = idx[k] == 0;
            let last = idx[k] + 1 == counts[k];
            let s_lo = if first { domain.lo(k) } else { a - overlap };
            let s_hi = if last { domain.hi(k) } else { b + overlap };
            lo[k] = s_lo;
            hi[k] = s_hi;
            bumps.push(Bump1d {
                support_lo: s_lo,
                support_hi: s_hi,
                ramp_width: 2.0 * overlap,
                has_lo_ramp: !first,
                has_hi_ramp: !last,
            });
        }
        let inner = BoxDomain::new(&lo, &hi)?;
        let outer = inner.fattened(margin);
        charts.push(CoveringChart {
            inner,
            outer,
            background_scale: 1.25 / margin,
            bumps,
        });

        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < counts[k] {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == dim {
                return Ok(CoveringP { domain: *domain, cell_size, overlap, charts });
            }
        }
    }
}

impl CoveringP {
    pub fn n_charts(&self) -> usize {
        self.charts.len()
    }

    pub fn chart(&self, i: usize) -> &CoveringChart {
        &self.charts[i]
    }

    pub fn charts(&self) -> &[CoveringChart] {
        &self.charts
    }

    /// Indices of charts whose bump support contains `x`.
    pub fn charts_at(&self, x: &VecN) -> Vec<usize> {
        self.charts
            .iter()
            .enumerate()
            .filter(|(_, c)| c.inner.contains(x, 0.0))
            .map(|(i, _)| i)
            .collect()
    }

    /// Smallest support-to-outer margin over all charts.
    pub fn min_margin(&self) -> f64 {
        self.charts
            .iter()
            .map(|c| c.margin())
            .fold(f64::INFINITY, f64::min)
    }

    /// Bump value of chart `i` at `x`.
    pub fn psi(&self, i: usize, x: &VecN) -> f64 {
        let c = &self.charts[i];
        let mut v = 1.0;
        for (k, b) in c.bumps.iter().enumerate() {
            v *= b.eval(x[k]).0;
            if v == 0.0 {
                return 0.0;
            }
        }
        v
    }

    /// `d psi_i / d x_k`.
    pub fn psi_d1(&self, i: usize, x: &VecN, k: usize) -> f64 {
        let c = &self.charts[i];
        let mut v = 1.0;
        for (a, b) in c.bumps.iter().enumerate() {
            let (f, f1, _) = b.eval(x[a]);
            v *= if a == k { f1 } else { f };
        }
        v
    }

    /// `d^2 psi_i / d x_k d x_l`.
    pub fn psi_d2(&self, i: usize, x: &VecN, k: usize, l: usize) -> f64 {
        let c = &self.charts[i];
        let mut v = 1.0;
        for (a, b) in c.bumps.iter().enumerate() {
            let (f, f1, f2) = b.eval(x[a]);
            v *= if a == k && a == l {
                f2
            } else if a == k || a == l {
                f1
            } else {
                f
            };
        }
        v
    }

    /// Largest deviation of the partition sum from 1 over the given points,
    /// together with the most negative bump value seen.
    pub fn partition_deviation(&self, points: &[VecN]) -> (f64, f64) {
        let mut worst = 0.0f64;
        let mut min_psi = f64::INFINITY;
        for p in points {
            let mut s = 0.0;
            for i in 0..self.charts.len() {
                let v = self.psi(i, p);
                min_psi = min_psi.min(v);
                s += v;
            }
            worst = worst.max((s - 1.0).abs());
        }
        (worst, min_psi)
    }

    /// Check the structural invariants: supports inside outers, and the unit
    /// fattening in background units compactly contained in the outer box.
    pub fn validate(&self) -> Result<()> {
        for c in &self.charts {
            let m = c.margin();
            if !(m > 0.0) {
                return Err(GeoError::EmptyDomain);
            }
            // unit fattening in background units = 1/scale in coordinates
            if 1.0 / c.background_scale >= m {
                return Err(GeoError::Invalid(alloc::format!(
                    "background scale {} too small for margin {}",
                    c.background_scale,
                    m
                )));
            }
        }
        Ok(())
    }
}
