//! Dense linear algebra for the tiny matrices this crate needs (n <= 4).
//!
//! Everything is `Copy` and stack-allocated. Symmetric eigenvalues come from
//! cyclic Jacobi sweeps, linear solves from Gaussian elimination with
//! partial pivoting.

#[allow(unused_imports)]
use crate::float::FloatExt as _;
use crate::{GeoError, Result};

/// Largest supported dimension.
pub const MAX_DIM: usize = 4;

/// A point or tangent vector in chart coordinates, n <= 4.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VecN {
    n: usize,
    v: [f64; MAX_DIM],
}

impl VecN {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1 && n <= MAX_DIM);
        VecN { n, v: [0.0; MAX_DIM] }
    }

    pub fn from_slice(s: &[f64]) -> Self {
        let mut v = Self::zeros(s.len());
        v.v[..s.len()].copy_from_slice(s);
        v
    }

    pub fn new2(x: f64, y: f64) -> Self {
        Self::from_slice(&[x, y])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.v[..self.n]
    }

    pub fn dot(&self, other: &VecN) -> f64 {
        debug_assert_eq!(self.n, other.n);
        let mut s = 0.0;
        for i in 0..self.n {
            s += self.v[i] * other.v[i];
        }
        s
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, a: f64) -> VecN {
        let mut out = *self;
        for i in 0..self.n {
            out.v[i] *= a;
        }
        out
    }

    pub fn add(&self, other: &VecN) -> VecN {
        debug_assert_eq!(self.n, other.n);
        let mut out = *self;
        for i in 0..self.n {
            out.v[i] += other.v[i];
        }
        out
    }

    pub fn sub(&self, other: &VecN) -> VecN {
        debug_assert_eq!(self.n, other.n);
        let mut out = *self;
        for i in 0..self.n {
            out.v[i] -= other.v[i];
        }
        out
    }

    pub fn axpy(&self, a: f64, other: &VecN) -> VecN {
        let mut out = *self;
        for i in 0..self.n {
            out.v[i] += a * other.v[i];
        }
        out
    }
}

impl core::ops::Index<usize> for VecN {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        debug_assert!(i < self.n);
        &self.v[i]
    }
}

impl core::ops::IndexMut<usize> for VecN {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        debug_assert!(i < self.n);
        &mut self.v[i]
    }
}

/// Square matrix of dimension n <= 4. Not assumed symmetric.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatN {
    n: usize,
    a: [[f64; MAX_DIM]; MAX_DIM],
}

impl MatN {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1 && n <= MAX_DIM);
        MatN { n, a: [[0.0; MAX_DIM]; MAX_DIM] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i][i] = 1.0;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.a[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &x) in d.iter().enumerate() {
            m.a[i][i] = x;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.n && j < self.n);
        self.a[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.n && j < self.n);
        self.a[i][j] = v;
    }

    pub fn col(&self, j: usize) -> VecN {
        let mut v = VecN::zeros(self.n);
        for i in 0..self.n {
            v[i] = self.a[i][j];
        }
        v
    }

    pub fn set_col(&mut self, j: usize, v: &VecN) {
        for i in 0..self.n {
            self.a[i][j] = v[i];
        }
    }

    pub fn transpose(&self) -> MatN {
        MatN::from_fn(self.n, |i, j| self.a[j][i])
    }

    pub fn add(&self, other: &MatN) -> MatN {
        debug_assert_eq!(self.n, other.n);
        MatN::from_fn(self.n, |i, j| self.a[i][j] + other.a[i][j])
    }

    pub fn sub(&self, other: &MatN) -> MatN {
        debug_assert_eq!(self.n, other.n);
        MatN::from_fn(self.n, |i, j| self.a[i][j] - other.a[i][j])
    }

    pub fn scale(&self, s: f64) -> MatN {
        MatN::from_fn(self.n, |i, j| self.a[i][j] * s)
    }

    pub fn mul(&self, other: &MatN) -> MatN {
        debug_assert_eq!(self.n, other.n);
        MatN::from_fn(self.n, |i, j| {
            let mut s = 0.0;
            for k in 0..self.n {
                s += self.a[i][k] * other.a[k][j];
            }
            s
        })
    }

    pub fn mul_vec(&self, v: &VecN) -> VecN {
        debug_assert_eq!(self.n, v.dim());
        let mut out = VecN::zeros(self.n);
        for i in 0..self.n {
            let mut s = 0.0;
            for k in 0..self.n {
                s += self.a[i][k] * v[k];
            }
            out[i] = s;
        }
        out
    }

    /// Bilinear form `u^T A v`.
    pub fn quad(&self, u: &VecN, v: &VecN) -> f64 {
        u.dot(&self.mul_vec(v))
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if (self.a[i][j] - self.a[j][i]).abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    pub fn symmetrize(&self) -> MatN {
        MatN::from_fn(self.n, |i, j| 0.5 * (self.a[i][j] + self.a[j][i]))
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                m = m.max(self.a[i][j].abs());
            }
        }
        m
    }

    pub fn det(&self) -> f64 {
        let (lu, perm_sign) = match self.lu() {
            Some(x) => x,
            None => return 0.0,
        };
        let mut d = perm_sign;
        for i in 0..self.n {
            d *= lu.a[i][i];
        }
        d
    }

    fn lu(&self) -> Option<(MatN, f64)> {
        let n = self.n;
        let mut m = *self;
        let mut sign = 1.0;
        for k in 0..n {
            let mut p = k;
            for i in (k + 1)..n {
                if m.a[i][k].abs() > m.a[p][k].abs() {
                    p = i;
                }
            }
            if m.a[p][k] == 0.0 {
                return None;
            }
            if p != k {
                m.a.swap(p, k);
                sign = -sign;
            }
            for i in (k + 1)..n {
                let f = m.a[i][k] / m.a[k][k];
                m.a[i][k] = f;
                for j in (k + 1)..n {
                    m.a[i][j] -= f * m.a[k][j];
                }
            }
        }
        Some((m, sign))
    }

    /// Solve `A x = b` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, b: &VecN) -> Result<VecN> {
        let n = self.n;
        let mut m = *self;
        let mut x = *b;
        for k in 0..n {
            let mut p = k;
            for i in (k + 1)..n {
                if m.a[i][k].abs() > m.a[p][k].abs() {
                    p = i;
                }
            }
            if m.a[p][k].abs() < 1e-300 {
                return Err(GeoError::SingularMetric { condition: f64::INFINITY });
            }
            if p != k {
                m.a.swap(p, k);
                let t = x[p];
                x[p] = x[k];
                x[k] = t;
            }
            for i in (k + 1)..n {
                let f = m.a[i][k] / m.a[k][k];
                for j in k..n {
                    m.a[i][j] -= f * m.a[k][j];
                }
                x[i] -= f * x[k];
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for j in (k + 1)..n {
                s -= m.a[k][j] * x[j];
            }
            x[k] = s / m.a[k][k];
        }
        Ok(x)
    }

    /// Inverse via column solves.
    pub fn inverse(&self) -> Result<MatN> {
        let n = self.n;
        let mut inv = MatN::zeros(n);
        for j in 0..n {
            let mut e = VecN::zeros(n);
            e[j] = 1.0;
            let c = self.solve(&e)?;
            inv.set_col(j, &c);
        }
        Ok(inv)
    }

    /// Eigenvalues of a symmetric matrix by cyclic Jacobi, ascending order.
    pub fn sym_eigenvalues(&self) -> [f64; MAX_DIM] {
        let (vals, _) = self.sym_eigen();
        vals
    }

    /// Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a
    /// symmetric matrix.
    pub fn sym_eigen(&self) -> ([f64; MAX_DIM], MatN) {
        let n = self.n;
        let mut a = *self;
        let mut q = MatN::identity(n);
        for _sweep in 0..50 {
            let mut off = 0.0f64;
            for i in 0..n {
                for j in (i + 1)..n {
                    off = off.max(a.a[i][j].abs());
                }
            }
            if off < 1e-15 * (1.0 + a.max_abs()) {
                break;
            }
            for p in 0..n {
                for r in (p + 1)..n {
                    let apq = a.a[p][r];
                    if apq.abs() < 1e-300 {
                        continue;
                    }
                    let theta = 0.5 * (a.a[r][r] - a.a[p][p]) / apq;
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a.a[k][p];
                        let akq = a.a[k][r];
                        a.a[k][p] = c * akp - s * akq;
                        a.a[k][r] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a.a[p][k];
                        let aqk = a.a[r][k];
                        a.a[p][k] = c * apk - s * aqk;
                        a.a[r][k] = s * apk + c * aqk;
                    }
                    for k in 0..n {
                        let qkp = q.a[k][p];
                        let qkq = q.a[k][r];
                        q.a[k][p] = c * qkp - s * qkq;
                        q.a[k][r] = s * qkp + c * qkq;
                    }
                }
            }
        }
        let mut vals = [0.0; MAX_DIM];
        for i in 0..n {
            vals[i] = a.a[i][i];
        }
        // sort ascending, permuting eigenvector columns along
        for i in 0..n {
            for j in 0..n - 1 - i {
                if vals[j] > vals[j + 1] {
                    vals.swap(j, j + 1);
                    for k in 0..n {
                        let t = q.a[k][j];
                        q.a[k][j] = q.a[k][j + 1];
                        q.a[k][j + 1] = t;
                    }
                }
            }
        }
        (vals, q)
    }

    /// Spectral condition number of a symmetric matrix.
    pub fn sym_condition(&self) -> f64 {
        let vals = self.sym_eigenvalues();
        let n = self.n;
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for &v in &vals[..n] {
            lo = lo.min(v.abs());
            hi = hi.max(v.abs());
        }
        if lo == 0.0 {
            f64::INFINITY
        } else {
            hi / lo
        }
    }

    /// Cholesky factor `L` with `A = L L^T`, or an error when not SPD.
    pub fn cholesky(&self) -> Result<MatN> {
        let n = self.n;
        let mut l = MatN::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let mut s = self.a[i][j];
                for k in 0..j {
                    s -= l.a[i][k] * l.a[j][k];
                }
                if i == j {
                    if s <= 0.0 {
                        return Err(GeoError::NotPositiveDefinite);
                    }
                    l.a[i][j] = s.sqrt();
                } else {
                    l.a[i][j] = s / l.a[j][j];
                }
            }
        }
        Ok(l)
    }

    /// Forward substitution `L x = b` for lower-triangular `L`.
    pub fn solve_lower(&self, b: &VecN) -> VecN {
        let n = self.n;
        let mut x = VecN::zeros(n);
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= self.a[i][k] * x[k];
            }
            x[i] = s / self.a[i][i];
        }
        x
    }
}

/// Largest absolute eigenvalue of `bg^{-1} t` for symmetric `t` and SPD
/// background `bg`: the operator norm of `t` over background-unit vectors.
pub fn whitened_opnorm(t: &MatN, bg: &MatN) -> Result<f64> {
    let l = bg.cholesky()?;
    let n = t.dim();
    // w = L^{-1} T L^{-T}, built column by column
    let mut half = MatN::zeros(n);
    for j in 0..n {
        let c = l.solve_lower(&t.col(j));
        half.set_col(j, &c);
    }
    let ht = half.transpose();
    let mut w = MatN::zeros(n);
    for j in 0..n {
        let c = l.solve_lower(&ht.col(j));
        w.set_col(j, &c);
    }
    let w = w.symmetrize();
    let vals = w.sym_eigenvalues();
    let mut m = 0.0f64;
    for &v in &vals[..n] {
        m = m.max(v.abs());
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_and_inverse() {
        let a = MatN::from_fn(3, |i, j| if i == j { 2.0 } else { 0.5 });
        let b = VecN::from_slice(&[1.0, 2.0, 3.0]);
        let x = a.solve(&b).unwrap();
        let r = a.mul_vec(&x).sub(&b);
        assert!(r.norm() < 1e-12);
        let inv = a.inverse().unwrap();
        let id = a.mul(&inv);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((id.get(i, j) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn jacobi_eigenvalues() {
        let a = MatN::from_fn(2, |i, j| [[2.0, 1.0], [1.0, 2.0]][i][j]);
        let vals = a.sym_eigenvalues();
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = MatN::diag(&[1.0, -0.5]);
        assert!(a.cholesky().is_err());
    }

    #[test]
    fn whitening_examples() {
        // identity vs identity
        let t = MatN::identity(2);
        assert!((whitened_opnorm(&t, &MatN::identity(2)).unwrap() - 1.0).abs() < 1e-14);
        // diag(4,1) vs identity -> 4
        let t = MatN::diag(&[4.0, 1.0]);
        assert!((whitened_opnorm(&t, &MatN::identity(2)).unwrap() - 4.0).abs() < 1e-12);
        // diag(4,1) vs background diag(4,4) -> 1
        let bg = MatN::diag(&[4.0, 4.0]);
        assert!((whitened_opnorm(&t, &bg).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn determinant_sign() {
        let a = MatN::from_fn(2, |i, j| [[0.0, 1.0], [1.0, 0.0]][i][j]);
        assert!((a.det() + 1.0).abs() < 1e-14);
    }
}
