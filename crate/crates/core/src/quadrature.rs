//! Gauss-Legendre rules, tensor-product grids, and disk/ball rules.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use crate::float::FloatExt as _;
use crate::geometry::BoxDomain;
use crate::linalg::VecN;

/// Nodes and weights of the n-point Gauss-Legendre rule on `[-1, 1]`.
///
/// Newton iteration on the Legendre recurrence; accurate to machine
/// precision for the node counts used here (n <= a few hundred).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and derivative by recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            pp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / pp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Gauss-Legendre rule mapped to `[a, b]`.
pub fn gauss_on(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        x.iter().map(|t| mid + half * t).collect(),
        w.iter().map(|v| v * half).collect(),
    )
}

/// A tensor-product quadrature grid over a box.
#[derive(Clone, Debug)]
pub struct BoxRule {
    pub nodes: Vec<VecN>,
    pub weights: Vec<f64>,
}

impl BoxRule {
    /// `n` Gauss nodes per axis.
    pub fn new(domain: &BoxDomain, n: usize) -> Self {
        let dim = domain.dim();
        let mut axes = Vec::with_capacity(dim);
        for k in 0..dim {
            axes.push(gauss_on(domain.lo(k), domain.hi(k), n));
        }
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut idx = vec![0usize; dim];
        loop {
            let mut p = VecN::zeros(dim);
            let mut w = 1.0;
            for k in 0..dim {
                p[k] = axes[k].0[idx[k]];
                w *= axes[k].1[idx[k]];
            }
            nodes.push(p);
            weights.push(w);
            // advance the multi-index
            let mut k = 0;
            loop {
                idx[k] += 1;
                if idx[k] < n {
                    break;
                }
                idx[k] = 0;
                k += 1;
                if k == dim {
                    return BoxRule { nodes, weights };
                }
            }
        }
    }

    pub fn integrate(&self, mut f: impl FnMut(&VecN) -> f64) -> f64 {
        let mut s = 0.0;
        for (p, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(p);
        }
        s
    }
}

/// Uniform sample grid over a box (cell midpoints), for sup-norm scans.
pub fn midpoint_grid(domain: &BoxDomain, n: usize) -> Vec<VecN> {
    let dim = domain.dim();
    let mut pts = Vec::new();
    let mut idx = vec![0usize; dim];
    loop {
        let mut p = VecN::zeros(dim);
        for k in 0..dim {
            let t = (idx[k] as f64 + 0.5) / n as f64;
            p[k] = domain.lo(k) + t * (domain.hi(k) - domain.lo(k));
        }
        pts.push(p);
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == dim {
                return pts;
            }
        }
    }
}

/// Quadrature rule on the unit disk/ball in scaled coordinates: nodes are
/// `(rho, omega)` with radius `rho` in `(0, 1)` and unit direction `omega`;
/// weights include the surface measure so that
/// `sum w_i f(rho_i, omega_i) ~= \int_{|z|<1} f(|z|, z/|z|) dz`.
#[derive(Clone, Debug)]
pub struct BallRule {
    pub dim: usize,
    /// (radius, direction, weight) triples.
    pub nodes: Vec<(f64, VecN, f64)>,
}

impl BallRule {
    /// `radial` Gauss nodes times a uniform angular rule with `angular`
    /// points (2D) or a product rule in spherical coordinates (3D).
    /// `radial_split` optionally splits the radial interval at an interior
    /// point, which pays off when the integrand has a kink or an integrable
    /// singularity at a known radius.
    pub fn new(dim: usize, radial: usize, angular: usize, radial_split: Option<f64>) -> Self {
        let mut rad_nodes: Vec<(f64, f64)> = Vec::new();
        let segments: &[(f64, f64)] = match radial_split {
            Some(s) if s > 1e-3 && s < 1.0 - 1e-3 => &[(0.0, s), (s, 1.0)],
            _ => &[(0.0, 1.0)],
        };
        let segments = segments.to_vec();
        for (a, b) in segments {
            let (x, w) = gauss_on(a, b, radial);
            rad_nodes.extend(x.into_iter().zip(w));
        }

        let mut nodes = Vec::new();
        match dim {
            1 => {
                for &(r, wr) in &rad_nodes {
                    for sgn in [-1.0, 1.0] {
                        let mut d = VecN::zeros(1);
                        d[0] = sgn;
                        nodes.push((r, d, wr));
                    }
                }
            }
            2 => {
                let wphi = 2.0 * core::f64::consts::PI / angular as f64;
                for &(r, wr) in &rad_nodes {
                    for k in 0..angular {
                        let phi = (k as f64 + 0.5) * wphi;
                        let (s, c) = phi.sin_cos();
                        nodes.push((r, VecN::new2(c, s), wr * r * wphi));
                    }
                }
            }
            3 => {
                // product rule: Gauss in cos(theta), uniform in phi
                let npolar = angular / 2;
                let (ct, wt) = gauss_on(-1.0, 1.0, npolar.max(4));
                let wphi = 2.0 * core::f64::consts::PI / angular as f64;
                for &(r, wr) in &rad_nodes {
                    for (c, wc) in ct.iter().zip(&wt) {
                        let s = (1.0 - c * c).max(0.0).sqrt();
                        for k in 0..angular {
                            let phi = (k as f64 + 0.5) * wphi;
                            let (sp, cp) = phi.sin_cos();
                            let d = VecN::from_slice(&[s * cp, s * sp, *c]);
                            nodes.push((r, d, wr * r * r * wc * wphi));
                        }
                    }
                }
            }
            _ => panic!("ball rule supports dim 1..=3"),
        }
        BallRule { dim, nodes }
    }
}
