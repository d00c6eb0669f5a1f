//! Chart-level regions (boolean combinations of boxes, disks, triangles)
//! and surface-level sets built from them.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

#[allow(unused_imports)]
use crate::float::FloatExt as _;
use crate::geometry::BoxDomain;
use crate::linalg::VecN;

/// A subset of a face chart.
#[derive(Clone, Debug)]
pub enum Region2 {
    /// The whole face.
    All,
    Rect(BoxDomain),
    Disk { center: VecN, radius: f64 },
    Triangle { a: VecN, b: VecN, c: VecN },
    Union(Box<Region2>, Box<Region2>),
    Intersect(Box<Region2>, Box<Region2>),
    /// Set difference `lhs \ rhs`.
    Diff(Box<Region2>, Box<Region2>),
    Empty,
}

impl Region2 {
    pub fn contains(&self, p: &VecN) -> bool {
        match self {
            Region2::All => true,
            Region2::Empty => false,
            Region2::Rect(b) => b.contains(p, 0.0),
            Region2::Disk { center, radius } => p.sub(center).norm() < *radius,
            Region2::Triangle { a, b, c } => {
                let sign = |p1: &VecN, p2: &VecN, p3: &VecN| {
                    (p1[0] - p3[0]) * (p2[1] - p3[1]) - (p2[0] - p3[0]) * (p1[1] - p3[1])
                };
                let d1 = sign(p, a, b);
                let d2 = sign(p, b, c);
                let d3 = sign(p, c, a);
                let has_neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
                let has_pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
                !(has_neg && has_pos)
            }
            Region2::Union(a, b) => a.contains(p) || b.contains(p),
            Region2::Intersect(a, b) => a.contains(p) && b.contains(p),
            Region2::Diff(a, b) => a.contains(p) && !b.contains(p),
        }
    }

    pub fn union(self, other: Region2) -> Region2 {
        Region2::Union(Box::new(self), Box::new(other))
    }

    pub fn intersect(self, other: Region2) -> Region2 {
        Region2::Intersect(Box::new(self), Box::new(other))
    }

    pub fn diff(self, other: Region2) -> Region2 {
        Region2::Diff(Box::new(self), Box::new(other))
    }
}

/// Parameter spans of an edge included in a set.
#[derive(Clone, Debug, PartialEq)]
pub enum EdgeSel {
    None,
    All,
    /// Disjoint, sorted subintervals of `[0, 1]`.
    Spans(Vec<(f64, f64)>),
}

impl EdgeSel {
    fn to_spans(&self) -> Vec<(f64, f64)> {
        match self {
            EdgeSel::None => Vec::new(),
            EdgeSel::All => alloc::vec![(0.0, 1.0)],
            EdgeSel::Spans(s) => s.clone(),
        }
    }

    fn from_spans(mut s: Vec<(f64, f64)>) -> EdgeSel {
        s.retain(|(a, b)| b > a);
        if s.is_empty() {
            EdgeSel::None
        } else if s.len() == 1 && s[0] == (0.0, 1.0) {
            EdgeSel::All
        } else {
            EdgeSel::Spans(s)
        }
    }

    pub fn union(&self, other: &EdgeSel) -> EdgeSel {
        let mut all = self.to_spans();
        all.extend(other.to_spans());
        all.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for (a, b) in all {
            if let Some(last) = merged.last_mut() {
                if a <= last.1 {
                    last.1 = last.1.max(b);
                    continue;
                }
            }
            merged.push((a, b));
        }
        EdgeSel::from_spans(merged)
    }

    pub fn intersect(&self, other: &EdgeSel) -> EdgeSel {
        let mut out = Vec::new();
        for (a1, b1) in self.to_spans() {
            for (a2, b2) in other.to_spans() {
                let a = a1.max(a2);
                let b = b1.min(b2);
                if b > a {
                    out.push((a, b));
                }
            }
        }
        EdgeSel::from_spans(out)
    }

    pub fn total_length(&self) -> f64 {
        self.to_spans().iter().map(|(a, b)| b - a).sum()
    }
}

/// Which vertices a set contains.
#[derive(Clone, Debug, PartialEq)]
pub enum VertexSel {
    None,
    All,
    Only(Vec<usize>),
    Except(Vec<usize>),
}

impl VertexSel {
    pub fn contains(&self, v: usize) -> bool {
        match self {
            VertexSel::None => false,
            VertexSel::All => true,
            VertexSel::Only(list) => list.contains(&v),
            VertexSel::Except(list) => !list.contains(&v),
        }
    }

    fn combine(&self, other: &VertexSel, n: usize, and: bool) -> VertexSel {
        let mut list = Vec::new();
        for v in 0..n {
            let inc = if and {
                self.contains(v) && other.contains(v)
            } else {
                self.contains(v) || other.contains(v)
            };
            if inc {
                list.push(v);
            }
        }
        if list.len() == n {
            VertexSel::All
        } else if list.is_empty() {
            VertexSel::None
        } else {
            VertexSel::Only(list)
        }
    }
}

/// A subset of the surface, decomposed by stratum: selected vertices, edge
/// parameter spans, and per-face chart regions. Set operations act
/// componentwise, which makes the valuation identity exact for the measure
/// evaluator (all four sides share quadrature nodes).
#[derive(Clone, Debug)]
pub struct SurfaceRegion {
    pub verts: VertexSel,
    pub edges: BTreeMap<usize, EdgeSel>,
    pub faces: BTreeMap<usize, Region2>,
}

impl SurfaceRegion {
    pub fn empty() -> Self {
        SurfaceRegion { verts: VertexSel::None, edges: BTreeMap::new(), faces: BTreeMap::new() }
    }

    /// The whole surface: every vertex, every edge, every face.
    pub fn everything(n_edges: usize, n_faces: usize) -> Self {
        let mut edges = BTreeMap::new();
        for e in 0..n_edges {
            edges.insert(e, EdgeSel::All);
        }
        let mut faces = BTreeMap::new();
        for f in 0..n_faces {
            faces.insert(f, Region2::All);
        }
        SurfaceRegion { verts: VertexSel::All, edges, faces }
    }

    pub fn with_vertex(mut self, v: usize) -> Self {
        self.verts = match self.verts {
            VertexSel::None => VertexSel::Only(alloc::vec![v]),
            VertexSel::Only(mut l) => {
                if !l.contains(&v) {
                    l.push(v);
                }
                VertexSel::Only(l)
            }
            other => other,
        };
        self
    }

    pub fn with_edge(mut self, e: usize, sel: EdgeSel) -> Self {
        self.edges.insert(e, sel);
        self
    }

    pub fn with_face(mut self, f: usize, region: Region2) -> Self {
        self.faces.insert(f, region);
        self
    }

    pub fn edge_sel(&self, e: usize) -> EdgeSel {
        self.edges.get(&e).cloned().unwrap_or(EdgeSel::None)
    }

    pub fn union(&self, other: &SurfaceRegion, n_vertices: usize) -> SurfaceRegion {
        let verts = self.verts.combine(&other.verts, n_vertices, false);
        let mut edges = BTreeMap::new();
        for e in self.edges.keys().chain(other.edges.keys()) {
            edges.insert(*e, self.edge_sel(*e).union(&other.edge_sel(*e)));
        }
        let mut faces = BTreeMap::new();
        for f in self.faces.keys().chain(other.faces.keys()) {
            let r = match (self.faces.get(f), other.faces.get(f)) {
                (Some(a), Some(b)) => a.clone().union(b.clone()),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => continue,
            };
            faces.insert(*f, r);
        }
        SurfaceRegion { verts, edges, faces }
    }

    pub fn intersect(&self, other: &SurfaceRegion, n_vertices: usize) -> SurfaceRegion {
        let verts = self.verts.combine(&other.verts, n_vertices, true);
        let mut edges = BTreeMap::new();
        for e in self.edges.keys() {
            if other.edges.contains_key(e) {
                edges.insert(*e, self.edge_sel(*e).intersect(&other.edge_sel(*e)));
            }
        }
        let mut faces = BTreeMap::new();
        for f in self.faces.keys() {
            if let (Some(a), Some(b)) = (self.faces.get(f), other.faces.get(f)) {
                faces.insert(*f, a.clone().intersect(b.clone()));
            }
        }
        SurfaceRegion { verts, edges, faces }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_membership() {
        let d = Region2::Disk { center: VecN::new2(0.0, 0.0), radius: 1.0 };
        assert!(d.contains(&VecN::new2(0.5, 0.0)));
        assert!(!d.contains(&VecN::new2(1.5, 0.0)));
        let t = Region2::Triangle {
            a: VecN::new2(0.0, 0.0),
            b: VecN::new2(1.0, 0.0),
            c: VecN::new2(0.0, 1.0),
        };
        assert!(t.contains(&VecN::new2(0.2, 0.2)));
        assert!(!t.contains(&VecN::new2(0.7, 0.7)));
        let u = d.clone().diff(t);
        assert!(u.contains(&VecN::new2(-0.5, 0.0)));
        assert!(!u.contains(&VecN::new2(0.2, 0.2)));
    }

    #[test]
    fn edge_span_algebra() {
        let a = EdgeSel::Spans(alloc::vec![(0.0, 0.4), (0.6, 1.0)]);
        let b = EdgeSel::Spans(alloc::vec![(0.3, 0.7)]);
        let u = a.union(&b);
        assert!((u.total_length() - 1.0).abs() < 1e-15);
        assert_eq!(u, EdgeSel::All);
        let i = a.intersect(&b);
        assert!((i.total_length() - 0.2).abs() < 1e-15);
        // inclusion-exclusion on lengths
        assert!(
            (u.total_length() + i.total_length() - a.total_length() - b.total_length()).abs()
                < 1e-15
        );
    }

    #[test]
    fn vertex_selection_algebra() {
        let a = VertexSel::Only(alloc::vec![0, 1]);
        let b = VertexSel::Except(alloc::vec![0]);
        let u = a.combine(&b, 4, false);
        let i = a.combine(&b, 4, true);
        assert!(u.contains(0) && u.contains(1) && u.contains(3));
        assert!(!i.contains(0) && i.contains(1) && !i.contains(3));
    }
}
