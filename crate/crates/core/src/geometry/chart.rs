//! Axis-aligned chart domains.

use alloc::string::String;

use crate::linalg::{VecN, MAX_DIM};
use crate::{GeoError, Result};

/// Axis-aligned box in chart coordinates, 1 <= dim <= 4.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxDomain {
    dim: usize,
    lo: [f64; MAX_DIM],
    hi: [f64; MAX_DIM],
}

impl BoxDomain {
    pub fn new(lo: &[f64], hi: &[f64]) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() || lo.len() > MAX_DIM {
            return Err(GeoError::EmptyDomain);
        }
        for (a, b) in lo.iter().zip(hi) {
            if !(a < b) {
                return Err(GeoError::EmptyDomain);
            }
        }
        let mut l = [0.0; MAX_DIM];
        let mut h = [0.0; MAX_DIM];
        l[..lo.len()].copy_from_slice(lo);
        h[..hi.len()].copy_from_slice(hi);
        Ok(BoxDomain { dim: lo.len(), lo: l, hi: h })
    }

    pub fn square(lo: f64, hi: f64) -> Result<Self> {
        Self::new(&[lo, lo], &[hi, hi])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lo(&self, k: usize) -> f64 {
        self.lo[k]
    }

    pub fn hi(&self, k: usize) -> f64 {
        self.hi[k]
    }

    pub fn extent(&self, k: usize) -> f64 {
        self.hi[k] - self.lo[k]
    }

    pub fn center(&self) -> VecN {
        let mut c = VecN::zeros(self.dim);
        for k in 0..self.dim {
            c[k] = 0.5 * (self.lo[k] + self.hi[k]);
        }
        c
    }

    pub fn contains(&self, p: &VecN, slack: f64) -> bool {
        if p.dim() != self.dim {
            return false;
        }
        for k in 0..self.dim {
            if p[k] < self.lo[k] - slack || p[k] > self.hi[k] + slack {
                return false;
            }
        }
        true
    }

    pub fn contains_box(&self, other: &BoxDomain, slack: f64) -> bool {
        if other.dim != self.dim {
            return false;
        }
        for k in 0..self.dim {
            if other.lo[k] < self.lo[k] - slack || other.hi[k] > self.hi[k] + slack {
                return false;
            }
        }
        true
    }

    /// Distance from an interior point to the box boundary (0 outside).
    pub fn boundary_distance(&self, p: &VecN) -> f64 {
        let mut d = f64::INFINITY;
        for k in 0..self.dim {
            d = d.min(p[k] - self.lo[k]).min(self.hi[k] - p[k]);
        }
        d.max(0.0)
    }

    /// Minimal axis gap between this box and an enclosing box.
    pub fn margin_within(&self, outer: &BoxDomain) -> f64 {
        let mut m = f64::INFINITY;
        for k in 0..self.dim {
            m = m.min(self.lo[k] - outer.lo[k]).min(outer.hi[k] - self.hi[k]);
        }
        m
    }

    /// Grow the box by `pad` on every side.
    pub fn fattened(&self, pad: f64) -> BoxDomain {
        let mut b = *self;
        for k in 0..self.dim {
            b.lo[k] -= pad;
            b.hi[k] += pad;
        }
        b
    }

    /// Intersect with another box; `None` when empty.
    pub fn intersect(&self, other: &BoxDomain) -> Option<BoxDomain> {
        let mut b = *self;
        for k in 0..self.dim {
            b.lo[k] = b.lo[k].max(other.lo[k]);
            b.hi[k] = b.hi[k].min(other.hi[k]);
            if !(b.lo[k] < b.hi[k]) {
                return None;
            }
        }
        Some(b)
    }

    pub fn volume(&self) -> f64 {
        let mut v = 1.0;
        for k in 0..self.dim {
            v *= self.extent(k);
        }
        v
    }
}

/// A named chart: an identifier plus its coordinate box.
#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    pub id: String,
    pub domain: BoxDomain,
}

impl Chart {
    pub fn new(id: impl Into<String>, domain: BoxDomain) -> Self {
        Chart { id: id.into(), domain }
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_boxes() {
        assert!(BoxDomain::new(&[0.0], &[0.0]).is_err());
        assert!(BoxDomain::new(&[1.0, 0.0], &[0.0, 1.0]).is_err());
        assert!(BoxDomain::new(&[], &[]).is_err());
    }

    #[test]
    fn geometry_helpers() {
        let b = BoxDomain::square(0.0, 1.0).unwrap();
        assert!(b.contains(&VecN::new2(0.5, 0.5), 0.0));
        assert!(!b.contains(&VecN::new2(1.5, 0.5), 0.0));
        assert!((b.boundary_distance(&VecN::new2(0.4, 0.5)) - 0.4).abs() < 1e-15);
        let inner = BoxDomain::square(0.25, 0.75).unwrap();
        assert!((inner.margin_within(&b) - 0.25).abs() < 1e-15);
        assert!(b.contains_box(&inner, 0.0));
    }
}
