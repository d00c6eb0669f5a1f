//! Shortest-path distances on grids and their vanishing-smoothing limits.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use crate::float::FloatExt as _;
use crate::geometry::{BoxDomain, CoveringP, MetricField, SymField};
use crate::linalg::VecN;
use crate::mollifier::{smooth_wrt_p, SmoothParams};
use crate::quadrature::gauss_on;
use crate::transport::CurveSpec;
use crate::{GeoError, Result};

/// Grid resolution control for [`distance_smoothed`].
#[derive(Clone, Copy, Debug)]
pub struct DistanceParams {
    /// Nodes per axis of the first grid.
    pub initial_grid: usize,
    /// Relative agreement between successive refinements that stops them.
    pub refine_rtol: f64,
    /// Cap on the refined grid size.
    pub max_grid: usize,
}

impl Default for DistanceParams {
    fn default() -> Self {
        DistanceParams { initial_grid: 33, refine_rtol: 0.01, max_grid: 300 }
    }
}

#[derive(Copy, Clone, PartialEq)]
struct HeapState {
    cost: f64,
    node: usize,
}

impl Eq for HeapState {}

impl Ord for HeapState {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        // reversed for a min-heap
        other.cost.partial_cmp(&self.cost).unwrap_or(core::cmp::Ordering::Equal)
    }
}

impl PartialOrd for HeapState {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Metric length of the straight chart segment between grid neighbors,
/// midpoint rule.
fn edge_weight(metric: &dyn SymField, a: &VecN, b: &VecN) -> Option<f64> {
    let mid = a.add(b).scale(0.5);
    let g = metric.eval(&mid)?;
    let d = b.sub(a);
    Some(g.quad(&d, &d).max(0.0).sqrt())
}

fn dijkstra_on_grid(
    metric: &dyn SymField,
    region: &BoxDomain,
    n: usize,
    from: &VecN,
    to: &VecN,
) -> Result<f64> {
    let idx = |i: usize, j: usize| i * n + j;
    let coord = |i: usize, j: usize| {
        VecN::new2(
            region.lo(0) + region.extent(0) * i as f64 / (n - 1) as f64,
            region.lo(1) + region.extent(1) * j as f64 / (n - 1) as f64,
        )
    };
    let snap = |p: &VecN| -> usize {
        let i = ((p[0] - region.lo(0)) / region.extent(0) * (n - 1) as f64).round();
        let j = ((p[1] - region.lo(1)) / region.extent(1) * (n - 1) as f64).round();
        idx(i.clamp(0.0, (n - 1) as f64) as usize, j.clamp(0.0, (n - 1) as f64) as usize)
    };
    let start = snap(from);
    let target = snap(to);

    let mut dist = vec![f64::INFINITY; n * n];
    let mut heap = BinaryHeap::new();
    dist[start] = 0.0;
    heap.push(HeapState { cost: 0.0, node: start });
    let offsets: [(i64, i64); 8] =
        [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)];
    while let Some(HeapState { cost, node }) = heap.pop() {
        if cost > dist[node] {
            continue;
        }
        if node == target {
            return Ok(cost);
        }
        let (i, j) = (node / n, node % n);
        let p = coord(i, j);
        for (di, dj) in offsets {
            let ni = i as i64 + di;
            let nj = j as i64 + dj;
            if ni < 0 || nj < 0 || ni >= n as i64 || nj >= n as i64 {
                continue;
            }
            let (ni, nj) = (ni as usize, nj as usize);
            let q = coord(ni, nj);
            let Some(w) = edge_weight(metric, &p, &q) else {
                continue;
            };
            let next = cost + w;
            let nn = idx(ni, nj);
            if next < dist[nn] {
                dist[nn] = next;
                heap.push(HeapState { cost: next, node: nn });
            }
        }
    }
    if dist[target].is_finite() {
        Ok(dist[target])
    } else {
        Err(GeoError::DisconnectedRegion)
    }
}

/// Shortest-path distance between `x` and `y` on an 8-connected grid over
/// `region`, refined until two successive grids agree to the requested
/// relative tolerance. Returns the distance and the final grid size.
pub fn distance_smoothed(
    metric: &dyn SymField,
    region: &BoxDomain,
    x: &VecN,
    y: &VecN,
    params: DistanceParams,
) -> Result<(f64, usize)> {
    let mut n = params.initial_grid.max(5);
    let mut prev = dijkstra_on_grid(metric, region, n, x, y)?;
    loop {
        let n2 = 2 * n - 1;
        if n2 > params.max_grid {
            return Ok((prev, n));
        }
        let next = dijkstra_on_grid(metric, region, n2, x, y)?;
        if (next - prev).abs() <= params.refine_rtol * next.abs().max(1e-300) {
            return Ok((next, n2));
        }
        prev = next;
        n = n2;
    }
}

/// Metric length of a curve by Gauss quadrature per segment.
pub fn curve_length(metric: &dyn SymField, curve: &CurveSpec, nodes: usize) -> Result<f64> {
    curve.validate()?;
    let mut total = 0.0;
    for i in 0..curve.segments.len() {
        let (a, b) = (curve.breakpoints[i], curve.breakpoints[i + 1]);
        let (ts, ws) = gauss_on(a, b, nodes);
        for (t, w) in ts.iter().zip(&ws) {
            let p = curve.point(*t);
            let v = curve.velocity(*t);
            let g = metric.eval(&p).ok_or(GeoError::OutsideChart)?;
            total += w * g.quad(&v, &v).max(0.0).sqrt();
        }
    }
    Ok(total)
}

/// Trend classification of a scale sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Verdict {
    Converged(f64),
    Diverging,
    Oscillating { liminf: f64, limsup: f64 },
}

/// The scale sweep of a distance (or length) and its trend.
#[derive(Clone, Debug)]
pub struct DistanceEstimate {
    pub from: VecN,
    pub to: VecN,
    pub per_eps: Vec<(f64, f64)>,
    pub verdict: Verdict,
}

/// Last-three-in-a-2%-band means converged; three successive >= 20%
/// increases means diverging; anything else oscillates, reported with the
/// liminf/limsup of the tail.
pub fn classify_trend(values: &[(f64, f64)]) -> Verdict {
    let vals: Vec<f64> = values.iter().map(|(_, v)| *v).collect();
    let m = vals.len();
    if m >= 3 {
        let tail3 = &vals[m - 3..];
        let hi = tail3.iter().cloned().fold(f64::MIN, f64::max);
        let lo = tail3.iter().cloned().fold(f64::MAX, f64::min);
        let mid = 0.5 * (hi + lo);
        if hi - lo <= 0.02 * mid.abs().max(1e-300) {
            return Verdict::Converged(*vals.last().unwrap());
        }
        if tail3[1] >= 1.2 * tail3[0] && tail3[2] >= 1.2 * tail3[1] {
            return Verdict::Diverging;
        }
    } else if m >= 1 {
        return Verdict::Converged(*vals.last().unwrap());
    }
    let tail = &vals[m.saturating_sub((m / 2).max(3))..];
    Verdict::Oscillating {
        liminf: tail.iter().cloned().fold(f64::MAX, f64::min),
        limsup: tail.iter().cloned().fold(f64::MIN, f64::max),
    }
}

/// Distance between two points under the covering-smoothed metric for each
/// scale, classified by trend. A lower-bound estimator for the limit
/// distance: only the canonical smoothing family is swept.
pub fn nonregular_distance(
    source: &MetricField,
    covering: &CoveringP,
    region: &BoxDomain,
    x: &VecN,
    y: &VecN,
    epsilons: &[f64],
    dist_params: DistanceParams,
    smooth: SmoothParams,
) -> Result<DistanceEstimate> {
    if epsilons.is_empty() {
        return Err(GeoError::EmptyEpsilonList);
    }
    let mut per_eps = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let g = smooth_wrt_p(source, covering, eps, smooth)?;
        let (d, _) = distance_smoothed(&g, region, x, y, dist_params)?;
        per_eps.push((eps, d));
    }
    let verdict = classify_trend(&per_eps);
    Ok(DistanceEstimate { from: *x, to: *y, per_eps, verdict })
}

/// Length of a fixed curve under the covering-smoothed metric per scale,
/// classified by the same trend rules (this is the quantity that genuinely
/// oscillates for layered step metrics, where the shortest path would
/// dodge the oscillation).
pub fn length_limit(
    source: &MetricField,
    covering: &CoveringP,
    curve: &CurveSpec,
    epsilons: &[f64],
    quad_nodes: usize,
    smooth: SmoothParams,
) -> Result<DistanceEstimate> {
    if epsilons.is_empty() {
        return Err(GeoError::EmptyEpsilonList);
    }
    let mut per_eps = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let g = smooth_wrt_p(source, covering, eps, smooth)?;
        let len = curve_length(&g, curve, quad_nodes)?;
        per_eps.push((eps, len));
    }
    let verdict = classify_trend(&per_eps);
    Ok(DistanceEstimate {
        from: curve.point(curve.t_start()),
        to: curve.point(curve.t_end()),
        per_eps,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ConstField;
    use crate::linalg::MatN;

    #[test]
    fn euclidean_diagonal() {
        let g = ConstField(MatN::identity(2));
        let region = BoxDomain::square(0.0, 1.0).unwrap();
        let (d, _) = distance_smoothed(
            &g,
            &region,
            &VecN::new2(0.0, 0.0),
            &VecN::new2(1.0, 1.0),
            DistanceParams::default(),
        )
        .unwrap();
        let want = 2.0f64.sqrt();
        assert!((d - want).abs() <= 0.01 * want, "d = {d}");
    }

    #[test]
    fn uniform_scaling_doubles_distance() {
        let g = ConstField(MatN::diag(&[4.0, 4.0]));
        let region = BoxDomain::square(0.0, 1.0).unwrap();
        let (d, _) = distance_smoothed(
            &g,
            &region,
            &VecN::new2(0.0, 0.0),
            &VecN::new2(1.0, 1.0),
            DistanceParams::default(),
        )
        .unwrap();
        let want = 2.0 * 2.0f64.sqrt();
        assert!((d - want).abs() <= 0.01 * want, "d = {d}");
    }

    #[test]
    fn sphere_equator_arc() {
        // chart metric diag(1, sin^2 theta); along the equator the distance
        // between phi = 0 and phi = 1 is 1
        struct Sph;
        impl SymField for Sph {
            fn dim(&self) -> usize {
                2
            }
            fn eval(&self, x: &VecN) -> Option<MatN> {
                let st = x[0].sin();
                Some(MatN::diag(&[1.0, st * st]))
            }
        }
        let region = BoxDomain::new(&[1.0, -0.2], &[2.2, 1.2]).unwrap();
        let a = VecN::new2(core::f64::consts::FRAC_PI_2, 0.0);
        let b = VecN::new2(core::f64::consts::FRAC_PI_2, 1.0);
        let (d, _) = distance_smoothed(&Sph, &region, &a, &b, DistanceParams::default()).unwrap();
        assert!((d - 1.0).abs() <= 0.01, "d = {d}");
    }

    #[test]
    fn symmetry_and_triangle_inequality() {
        use rand::{Rng, SeedableRng};
        struct Bump;
        impl SymField for Bump {
            fn dim(&self) -> usize {
                2
            }
            fn eval(&self, x: &VecN) -> Option<MatN> {
                let s = 1.0 + 0.5 * (3.0 * x[0]).sin() * (2.0 * x[1]).cos();
                Some(MatN::diag(&[s, s]))
            }
        }
        let region = BoxDomain::square(0.0, 1.0).unwrap();
        let params = DistanceParams { initial_grid: 17, refine_rtol: 0.01, max_grid: 33 };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let n = 17usize;
        let node = |i: usize, j: usize| {
            VecN::new2(i as f64 / (n - 1) as f64, j as f64 / (n - 1) as f64)
        };
        for _ in 0..100 {
            let a = node(rng.gen_range(0..n), rng.gen_range(0..n));
            let b = node(rng.gen_range(0..n), rng.gen_range(0..n));
            let c = node(rng.gen_range(0..n), rng.gen_range(0..n));
            if a == b || b == c || a == c {
                continue;
            }
            let dab = dijkstra_on_grid(&Bump, &region, n, &a, &b).unwrap();
            let dba = dijkstra_on_grid(&Bump, &region, n, &b, &a).unwrap();
            assert!((dab - dba).abs() <= 1e-9, "symmetry {dab} vs {dba}");
            let dac = dijkstra_on_grid(&Bump, &region, n, &a, &c).unwrap();
            let dcb = dijkstra_on_grid(&Bump, &region, n, &c, &b).unwrap();
            assert!(dab <= dac + dcb + 1e-9);
        }
    }

    #[test]
    fn trend_classification() {
        let conv = [(0.2, 1.0), (0.1, 0.99), (0.05, 0.991), (0.025, 0.9905)];
        assert!(matches!(classify_trend(&conv), Verdict::Converged(_)));
        let div = [(0.2, 1.0), (0.1, 1.3), (0.05, 1.7), (0.025, 2.2)];
        assert!(matches!(classify_trend(&div), Verdict::Diverging));
        let osc = [(0.2, 1.0), (0.1, 1.3), (0.05, 1.0), (0.025, 1.3), (0.0125, 1.0)];
        match classify_trend(&osc) {
            Verdict::Oscillating { liminf, limsup } => {
                assert!(liminf <= 1.0 + 1e-12 && limsup >= 1.3 - 1e-12);
            }
            other => panic!("expected oscillation, got {other:?}"),
        }
    }
}
