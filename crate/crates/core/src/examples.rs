//! Registry of the bundled example metrics, surfaces, and curves.
//!
//! Every builder is deterministic in its parameters and the produced
//! objects pass their module's validation gates.

use alloc::string::String;
use alloc::vec::Vec;

use crate::cantor::{CantorCurve, CantorSphere};
#[allow(unused_imports)]
use crate::float::FloatExt as _;
use crate::geometry::{BoxDomain, Chart, MetricField, Regularity, UndefinedSet};
use crate::linalg::{MatN, VecN};
use crate::surface::{Edge, EdgeSide, Face, PiecewiseSurface, Region2, Vertex, VertexWedge};
use crate::transport::Segment;
use crate::{GeoError, Result};

/// Scalar parameters for a builder, with defaults.
#[derive(Clone, Debug, Default)]
pub struct Params {
    entries: Vec<(String, f64)>,
}

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(mut self, key: &str, value: f64) -> Self {
        self.entries.push((String::from(key), value));
        self
    }

    pub fn get(&self, key: &str, default: f64) -> f64 {
        self.entries
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| *v)
            .unwrap_or(default)
    }

    pub fn entries(&self) -> &[(String, f64)] {
        &self.entries
    }
}

/// What a builder produces.
pub enum ExampleObject {
    Field(MetricField),
    Surface(PiecewiseSurface),
    CantorCurve(CantorCurve),
    CantorSphere(CantorSphere),
}

/// All registered example names.
pub fn registered_names() -> &'static [&'static str] {
    &[
        "flat",
        "degenerate",
        "oscillating",
        "conformal",
        "cone",
        "dihedral",
        "dihedral_shear",
        "dihedral_wavy",
        "sphere_patch",
        "hyperbolic_patch",
        "polar_flat",
        "cube",
        "tetrahedron",
        "sphere_octa",
        "cylinder_capped",
        "dihedral_surface",
        "cantor_curve",
        "cantor_sphere",
    ]
}

/// Build a registered example.
pub fn build_example(name: &str, params: &Params) -> Result<ExampleObject> {
    match name {
        "flat" => Ok(ExampleObject::Field(flat_metric())),
        "degenerate" => Ok(ExampleObject::Field(degenerate_metric())),
        "oscillating" => Ok(ExampleObject::Field(oscillating_metric())),
        "conformal" => Ok(ExampleObject::Field(cone_metric(0.75))),
        "cone" => Ok(ExampleObject::Field(cone_metric(params.get("alpha", 0.75)))),
        "dihedral" => Ok(ExampleObject::Field(dihedral_metric())),
        "dihedral_shear" => {
            Ok(ExampleObject::Field(dihedral_shear_metric(params.get("shear", 0.3))))
        }
        "dihedral_wavy" => Ok(ExampleObject::Field(dihedral_wavy_metric())),
        "sphere_patch" => Ok(ExampleObject::Field(sphere_patch_metric())),
        "hyperbolic_patch" => Ok(ExampleObject::Field(hyperbolic_patch_metric())),
        "polar_flat" => Ok(ExampleObject::Field(polar_flat_metric())),
        "cube" => Ok(ExampleObject::Surface(cube_surface()?)),
        "tetrahedron" => Ok(ExampleObject::Surface(tetrahedron_surface()?)),
        "sphere_octa" => Ok(ExampleObject::Surface(octant_sphere_surface()?)),
        "cylinder_capped" => {
            Ok(ExampleObject::Surface(capped_cylinder_surface(params.get("h", 1.5))?))
        }
        "dihedral_surface" => Ok(ExampleObject::Surface(dihedral_surface()?)),
        "cantor_curve" => Ok(ExampleObject::CantorCurve(CantorCurve::build(
            params.get("n", (1u32 << 16) as f64) as usize,
        )?)),
        "cantor_sphere" => Ok(ExampleObject::CantorSphere(CantorSphere::build(
            params.get("n", (1u32 << 16) as f64) as usize,
        )?)),
        _ => Err(GeoError::UnknownExample {
            name: String::from(name),
            available: registered_names().join(", "),
        }),
    }
}

// ---------------------------------------------------------------- fields

pub fn flat_metric() -> MetricField {
    MetricField::new(
        Chart::new("flat", BoxDomain::square(-1.0, 1.0).unwrap()),
        Regularity::Smooth,
        UndefinedSet::empty(),
        |_| Some(MatN::identity(2)),
    )
}

/// `diag(1, x^2)` on `(-1,1)^2`: defined everywhere, degenerate on the
/// axis `x = 0`.
pub fn degenerate_metric() -> MetricField {
    MetricField::new(
        Chart::new("degenerate", BoxDomain::square(-1.0, 1.0).unwrap()),
        Regularity::LpLoc(2.0),
        UndefinedSet::empty(),
        |x| Some(MatN::diag(&[1.0, x[0] * x[0]])),
    )
}

/// Conformal factor 1 on dyadic bands `2^-2n-1 < |x| <= 2^-2n` and 2 on the
/// bands in between: lengths of fixed curves oscillate as the smoothing
/// scale shrinks.
pub fn oscillating_metric() -> MetricField {
    MetricField::new(
        Chart::new("oscillating", BoxDomain::square(-1.0, 1.0).unwrap()),
        Regularity::Measurable,
        UndefinedSet::empty(),
        |x| {
            let ax = x[0].abs();
            let f = if ax == 0.0 {
                1.0
            } else {
                let k = (-ax.log2()).floor() as i64; // |x| in (2^{-k-1}, 2^{-k}]
                if k.rem_euclid(2) == 0 {
                    1.0
                } else {
                    2.0
                }
            };
            Some(MatN::diag(&[f, f]))
        },
    )
    .with_kink_distance(|x| {
        let ax = x[0].abs();
        if ax == 0.0 || ax >= 1.0 {
            return ax.min((ax - 1.0).abs());
        }
        let k = (-ax.log2()).floor();
        let hi = 0.5f64.powf(k);
        let lo = 0.5 * hi;
        (ax - lo).min(hi - ax).min(ax)
    })
}

/// `r^(2 (alpha - 1)) (dx^2 + dy^2)`: the flat cone of total angle
/// `2 pi alpha`, undefined at the tip. `alpha = 3/4` is both the singular
/// conformal example and the chart model of a cube vertex.
pub fn cone_metric(alpha: f64) -> MetricField {
    let p = alpha - 1.0;
    MetricField::new(
        Chart::new("cone", BoxDomain::square(-1.0, 1.0).unwrap()),
        Regularity::LpLoc(1.5),
        UndefinedSet::point(VecN::new2(0.0, 0.0)),
        move |x| {
            let r2 = x[0] * x[0] + x[1] * x[1];
            if r2 == 0.0 {
                None
            } else {
                Some(MatN::identity(2).scale(r2.powf(p)))
            }
        },
    )
}

/// Two flat half-planes in projection coordinates: `dx^2 + dy^2` below the
/// x-axis, `dx^2 + 2 dy^2` above; the induced metric on the axis is `dx^2`
/// from both sides.
pub fn dihedral_metric() -> MetricField {
    MetricField::new(
        Chart::new("dihedral", BoxDomain::square(-2.0, 2.0).unwrap()),
        Regularity::Measurable,
        UndefinedSet::empty(),
        |x| {
            let f = if x[1] > 0.0 { 2.0 } else { 1.0 };
            Some(MatN::diag(&[1.0, f]))
        },
    )
    .with_kink_distance(|x| x[1].abs())
}

/// Dihedral with a shear on the upper side; still glues nicely (the
/// tangential part stays `dx^2`) but the transported angle drifts at
/// positive smoothing scales, at a rate proportional to the scale.
pub fn dihedral_shear_metric(shear: f64) -> MetricField {
    MetricField::new(
        Chart::new("dihedral-shear", BoxDomain::square(-2.0, 2.0).unwrap()),
        Regularity::Measurable,
        UndefinedSet::empty(),
        move |x| {
            if x[1] > 0.0 {
                Some(MatN::from_fn(2, |i, j| [[1.0, shear], [shear, 2.0]][i][j]))
            } else {
                Some(MatN::identity(2))
            }
        },
    )
    .with_kink_distance(|x| x[1].abs())
}

/// Dihedral whose upper metric varies along the edge; the glue is still
/// exact (`dx^2` induced from both sides) but the angle cosine genuinely
/// moves across the smoothing layer, at a rate bounded by the scale.
pub fn dihedral_wavy_metric() -> MetricField {
    MetricField::new(
        Chart::new("dihedral-wavy", BoxDomain::square(-2.0, 2.0).unwrap()),
        Regularity::Measurable,
        UndefinedSet::empty(),
        |x| {
            if x[1] > 0.0 {
                Some(MatN::diag(&[1.0, 2.0 + 0.5 * (2.0 * x[0]).sin()]))
            } else {
                Some(MatN::identity(2))
            }
        },
    )
    .with_kink_distance(|x| x[1].abs())
}

/// Round unit sphere in polar coordinates, away from the poles.
pub fn sphere_patch_metric() -> MetricField {
    MetricField::new(
        Chart::new("sphere-patch", BoxDomain::new(&[0.35, -0.6], &[2.8, 6.9]).unwrap()),
        Regularity::Smooth,
        UndefinedSet::empty(),
        |x| {
            let st = x[0].sin();
            Some(MatN::diag(&[1.0, st * st]))
        },
    )
    .with_d1(|x, k| {
        if k == 0 {
            MatN::diag(&[0.0, 2.0 * x[0].sin() * x[0].cos()])
        } else {
            MatN::zeros(2)
        }
    })
    .with_d2(|x, k, l| {
        if k == 0 && l == 0 {
            MatN::diag(&[0.0, 2.0 * (2.0 * x[0]).cos()])
        } else {
            MatN::zeros(2)
        }
    })
}

/// Constant curvature -1 patch: `diag(1, e^{2x})`.
pub fn hyperbolic_patch_metric() -> MetricField {
    MetricField::new(
        Chart::new("hyperbolic-patch", BoxDomain::square(-1.0, 1.0).unwrap()),
        Regularity::Smooth,
        UndefinedSet::empty(),
        |x| Some(MatN::diag(&[1.0, (2.0 * x[0]).exp()])),
    )
    .with_d1(|x, k| {
        if k == 0 {
            MatN::diag(&[0.0, 2.0 * (2.0 * x[0]).exp()])
        } else {
            MatN::zeros(2)
        }
    })
    .with_d2(|x, k, l| {
        if k == 0 && l == 0 {
            MatN::diag(&[0.0, 4.0 * (2.0 * x[0]).exp()])
        } else {
            MatN::zeros(2)
        }
    })
}

/// Flat plane in polar coordinates `diag(1, r^2)`.
pub fn polar_flat_metric() -> MetricField {
    MetricField::new(
        Chart::new("polar-flat", BoxDomain::new(&[0.5, 0.0], &[4.0, 6.3]).unwrap()),
        Regularity::Smooth,
        UndefinedSet::empty(),
        |x| Some(MatN::diag(&[1.0, x[0] * x[0]])),
    )
    .with_d1(|x, k| {
        if k == 0 {
            MatN::diag(&[0.0, 2.0 * x[0]])
        } else {
            MatN::zeros(2)
        }
    })
    .with_d2(|_, k, l| {
        if k == 0 && l == 0 {
            MatN::diag(&[0.0, 2.0])
        } else {
            MatN::zeros(2)
        }
    })
}

// --------------------------------------------------------------- surfaces

fn flat_face(name: &str, box_lo: f64, box_hi: f64, region: Region2) -> Face {
    let chart = Chart::new(name, BoxDomain::square(box_lo, box_hi).unwrap());
    Face {
        chart: chart.clone(),
        metric: MetricField::new(chart, Regularity::Smooth, UndefinedSet::empty(), |_| {
            Some(MatN::identity(2))
        }),
        region,
    }
}

fn left_of(dir: &VecN, from: &VecN, probe: &VecN) -> bool {
    let q = probe.sub(from);
    dir[0] * q[1] - dir[1] * q[0] > 0.0
}

/// The unit cube surface: 6 flat faces, 12 straight edges, 8 vertices with
/// angle defect `pi/2` each.
pub fn cube_surface() -> Result<PiecewiseSurface> {
    // face index: 2 * normal_axis + level; chart axes = other axes ascending
    let face_id = |axis: usize, level: usize| 2 * axis + level;
    let chart_axes = |axis: usize| match axis {
        0 => (1usize, 2usize),
        1 => (0, 2),
        _ => (0, 1),
    };
    let to_chart = |axis: usize, p: &[f64; 3]| {
        let (a, b) = chart_axes(axis);
        VecN::new2(p[a], p[b])
    };

    let mut faces = Vec::new();
    for axis in 0..3 {
        for level in 0..2 {
            faces.push(flat_face(
                &alloc::format!("cube-{axis}{level}"),
                -0.5,
                1.5,
                Region2::Rect(BoxDomain::square(0.0, 1.0)?),
            ));
        }
    }

    let vid = |p: &[f64; 3]| (p[0] as usize) + 2 * (p[1] as usize) + 4 * (p[2] as usize);
    let corners: Vec<[f64; 3]> = (0..8)
        .map(|i| [(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64])
        .collect();

    // edges: one per varying axis and pair of fixed levels
    let mut edges = Vec::new();
    for v_axis in 0..3 {
        let (f1, f2) = chart_axes(v_axis); // the fixed axes
        for c1 in 0..2 {
            for c2 in 0..2 {
                let mut start = [0.0; 3];
                start[f1] = c1 as f64;
                start[f2] = c2 as f64;
                let mut end = start;
                end[v_axis] = 1.0;
                let mk_side = |face_axis: usize, level: usize| {
                    let a = to_chart(face_axis, &start);
                    let b = to_chart(face_axis, &end);
                    let dir = b.sub(&a);
                    EdgeSide {
                        face: face_id(face_axis, level),
                        curve: Segment::Line { from: a, to: b },
                        face_on_left: left_of(&dir, &a, &VecN::new2(0.5, 0.5)),
                    }
                };
                edges.push(Edge {
                    sides: [mk_side(f1, c1), mk_side(f2, c2)],
                    endpoints: (Some(vid(&start)), Some(vid(&end))),
                });
            }
        }
    }

    // vertices: three wedges each, rays along the two chart sides
    let mut vertices = Vec::new();
    for corner in &corners {
        let mut wedges = Vec::new();
        for axis in 0..3 {
            let level = corner[axis] as usize;
            let at = to_chart(axis, corner);
            let ray = |k: usize| {
                let mut to = at;
                to[k] = if at[k] == 0.0 { 1.0 } else { 0.0 };
                Segment::Line { from: at, to }
            };
            wedges.push(VertexWedge { face: face_id(axis, level), at, rays: [ray(0), ray(1)] });
        }
        vertices.push(Vertex { wedges });
    }

    let s = PiecewiseSurface {
        name: String::from("cube"),
        vertices,
        edges,
        faces,
        closed: true,
    };
    s.validate()?;
    Ok(s)
}

/// Regular tetrahedron with unit sides: 4 flat triangular faces, angle
/// defect `pi` at each of the 4 vertices.
pub fn tetrahedron_surface() -> Result<PiecewiseSurface> {
    let h = 3.0f64.sqrt() / 2.0;
    let chart_corner = [VecN::new2(0.0, 0.0), VecN::new2(1.0, 0.0), VecN::new2(0.5, h)];
    // faces: vertex triples in ascending order
    let triples: [[usize; 3]; 4] = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
    let corner_of = |face: usize, v: usize| {
        let pos = triples[face].iter().position(|&x| x == v).unwrap();
        chart_corner[pos]
    };

    let mut faces = Vec::new();
    for t in &triples {
        faces.push(flat_face(
            &alloc::format!("tet-{}{}{}", t[0], t[1], t[2]),
            -0.5,
            1.5,
            Region2::Triangle { a: chart_corner[0], b: chart_corner[1], c: chart_corner[2] },
        ));
    }
    let centroid = VecN::new2(0.5, h / 3.0);

    let mut edges = Vec::new();
    for i in 0..4 {
        for j in (i + 1)..4 {
            let adjacent: Vec<usize> = (0..4)
                .filter(|&f| triples[f].contains(&i) && triples[f].contains(&j))
                .collect();
            let mk_side = |f: usize| {
                let a = corner_of(f, i);
                let b = corner_of(f, j);
                EdgeSide {
                    face: f,
                    curve: Segment::Line { from: a, to: b },
                    face_on_left: left_of(&b.sub(&a), &a, &centroid),
                }
            };
            edges.push(Edge {
                sides: [mk_side(adjacent[0]), mk_side(adjacent[1])],
                endpoints: (Some(i), Some(j)),
            });
        }
    }

    let mut vertices = Vec::new();
    for v in 0..4 {
        let mut wedges = Vec::new();
        for (f, t) in triples.iter().enumerate() {
            if !t.contains(&v) {
                continue;
            }
            let at = corner_of(f, v);
            let others: Vec<VecN> =
                t.iter().filter(|&&x| x != v).map(|&x| corner_of(f, x)).collect();
            wedges.push(VertexWedge {
                face: f,
                at,
                rays: [
                    Segment::Line { from: at, to: others[0] },
                    Segment::Line { from: at, to: others[1] },
                ],
            });
        }
        vertices.push(Vertex { wedges });
    }

    let s = PiecewiseSurface {
        name: String::from("tetrahedron"),
        vertices,
        edges,
        faces,
        closed: true,
    };
    s.validate()?;
    Ok(s)
}

/// Gnomonic-chart metric shared by all octant faces of the round sphere:
/// the pullback of the unit-sphere metric under `P / |P|` with
/// `P(u, v) = A + u (B - A) + v (C - A)` for the three axis points of an
/// octant. The coefficients do not depend on the octant's signs.
pub fn gnomonic_metric_field(chart: Chart) -> MetricField {
    // <P_u, P_u> = <P_v, P_v> = 2, <P_u, P_v> = 1,
    // b_u = P . P_u = 2u + v - 1, b_v = 2v + u - 1,
    // q = |P|^2 = (1 - u - v)^2 + u^2 + v^2
    let a = [[2.0, 1.0], [1.0, 2.0]];
    let bq = |x: &VecN| {
        let (u, v) = (x[0], x[1]);
        let b = [2.0 * u + v - 1.0, 2.0 * v + u - 1.0];
        let w = 1.0 - u - v;
        (b, w * w + u * u + v * v)
    };
    let value = move |x: &VecN| {
        let (b, q) = bq(x);
        Some(MatN::from_fn(2, |i, j| a[i][j] / q - b[i] * b[j] / (q * q)))
    };
    // db_i / dx_k = A_ki and dq / dx_k = 2 b_k
    let d1 = move |x: &VecN, k: usize| {
        let (b, q) = bq(x);
        MatN::from_fn(2, |i, j| {
            -2.0 * a[i][j] * b[k] / (q * q) - (a[k][i] * b[j] + b[i] * a[k][j]) / (q * q)
                + 4.0 * b[i] * b[j] * b[k] / (q * q * q)
        })
    };
    let d2 = move |x: &VecN, k: usize, l: usize| {
        let (b, q) = bq(x);
        let q2 = q * q;
        let q3 = q2 * q;
        let q4 = q3 * q;
        MatN::from_fn(2, |i, j| {
            let t1 = -2.0 * a[i][j] * (a[l][k] / q2 - 4.0 * b[k] * b[l] / q3);
            let t2 = -(a[k][i] * a[l][j] + a[l][i] * a[k][j]) / q2
                + 4.0 * (a[k][i] * b[j] + b[i] * a[k][j]) * b[l] / q3;
            let t3 = 4.0 * (a[l][i] * b[j] * b[k] + b[i] * a[l][j] * b[k] + b[i] * b[j] * a[l][k])
                / q3
                - 24.0 * b[i] * b[j] * b[k] * b[l] / q4;
            t1 + t2 + t3
        })
    };
    MetricField::new(chart, Regularity::Smooth, UndefinedSet::empty(), value)
        .with_d1(d1)
        .with_d2(d2)
}

/// The round sphere cut into 8 octant triangles along the coordinate great
/// circles: geodesic edges, zero-defect vertices, all curvature in the
/// faces.
pub fn octant_sphere_surface() -> Result<PiecewiseSurface> {
    // face id 0..8: bit i gives the sign of axis i
    // chart corners: (0,0) -> x-axis point, (1,0) -> y, (0,1) -> z
    let corner = [VecN::new2(0.0, 0.0), VecN::new2(1.0, 0.0), VecN::new2(0.0, 1.0)];
    let mut faces = Vec::new();
    for f in 0..8usize {
        let chart = Chart::new(alloc::format!("octant-{f}"), BoxDomain::square(-0.35, 1.35)?);
        faces.push(Face {
            chart: chart.clone(),
            metric: gnomonic_metric_field(chart),
            region: Region2::Triangle { a: corner[0], b: corner[1], c: corner[2] },
        });
    }
    let centroid = VecN::new2(1.0 / 3.0, 1.0 / 3.0);
    // vertex id: 2 * axis + sign bit
    let vid = |axis: usize, bit: usize| 2 * axis + bit;

    let mut edges = Vec::new();
    for f in 0..8usize {
        for flip_axis in 0..3usize {
            let g = f ^ (1 << flip_axis);
            if g < f {
                continue; // count each adjacent pair once
            }
            // the shared great-circle arc joins the two corners that are
            // not the flipped axis
            let keep: Vec<usize> = (0..3).filter(|&a| a != flip_axis).collect();
            let (ci, cj) = (corner[keep[0]], corner[keep[1]]);
            let mk_side = |face: usize| EdgeSide {
                face,
                curve: Segment::Line { from: ci, to: cj },
                face_on_left: left_of(&cj.sub(&ci), &ci, &centroid),
            };
            edges.push(Edge {
                sides: [mk_side(f), mk_side(g)],
                endpoints: (
                    Some(vid(keep[0], (f >> keep[0]) & 1)),
                    Some(vid(keep[1], (f >> keep[1]) & 1)),
                ),
            });
        }
    }

    let mut vertices = Vec::new();
    for axis in 0..3usize {
        for bit in 0..2usize {
            let mut wedges = Vec::new();
            for f in 0..8usize {
                if (f >> axis) & 1 != bit {
                    continue;
                }
                let at = corner[axis];
                let others: Vec<VecN> = (0..3).filter(|&a| a != axis).map(|a| corner[a]).collect();
                wedges.push(VertexWedge {
                    face: f,
                    at,
                    rays: [
                        Segment::Line { from: at, to: others[0] },
                        Segment::Line { from: at, to: others[1] },
                    ],
                });
            }
            vertices.push(Vertex { wedges });
        }
    }

    let s = PiecewiseSurface {
        name: String::from("sphere-octa"),
        vertices,
        edges,
        faces,
        closed: true,
    };
    s.validate()?;
    Ok(s)
}

/// A unit-radius cylinder of height `h` with two flat caps: all curvature
/// sits on the two rim edges (`K1 = 1` per unit length).
pub fn capped_cylinder_surface(h: f64) -> Result<PiecewiseSurface> {
    if !(h > 0.2) {
        return Err(GeoError::Invalid(String::from("cylinder height must exceed 0.2")));
    }
    let tau = core::f64::consts::TAU;
    let cap = |name: &str| Face {
        chart: Chart::new(name, BoxDomain::square(-1.4, 1.4).unwrap()),
        metric: MetricField::new(
            Chart::new(name, BoxDomain::square(-1.4, 1.4).unwrap()),
            Regularity::Smooth,
            UndefinedSet::empty(),
            |_| Some(MatN::identity(2)),
        ),
        region: Region2::Disk { center: VecN::new2(0.0, 0.0), radius: 1.0 },
    };
    let side_chart = Chart::new("cyl-side", BoxDomain::new(&[-0.4, -0.4], &[tau + 0.4, h + 0.4])?);
    let side = Face {
        chart: side_chart.clone(),
        metric: MetricField::new(side_chart, Regularity::Smooth, UndefinedSet::empty(), |_| {
            Some(MatN::identity(2))
        }),
        region: Region2::Rect(BoxDomain::new(&[0.0, 0.0], &[tau, h])?),
    };
    let faces = alloc::vec![cap("cap-top"), cap("cap-bottom"), side];
    let side_center = VecN::new2(0.5 * tau, 0.5 * h);
    let origin = VecN::new2(0.0, 0.0);

    let rim = |cap_face: usize, z: f64, vertex: usize| -> Edge {
        let arc = Segment::Arc { center: origin, radius: 1.0, ang_from: 0.0, ang_to: tau };
        let line = Segment::Line { from: VecN::new2(0.0, z), to: VecN::new2(tau, z) };
        Edge {
            sides: [
                EdgeSide { face: cap_face, curve: arc, face_on_left: true },
                EdgeSide {
                    face: 2,
                    curve: line,
                    face_on_left: left_of(&VecN::new2(tau, 0.0), &VecN::new2(0.0, z), &side_center),
                },
            ],
            endpoints: (Some(vertex), Some(vertex)),
        }
    };
    let seam = Edge {
        sides: [
            EdgeSide {
                face: 2,
                curve: Segment::Line { from: VecN::new2(0.0, 0.0), to: VecN::new2(0.0, h) },
                face_on_left: left_of(&VecN::new2(0.0, h), &origin, &side_center),
            },
            EdgeSide {
                face: 2,
                curve: Segment::Line { from: VecN::new2(tau, 0.0), to: VecN::new2(tau, h) },
                face_on_left: left_of(&VecN::new2(0.0, h), &VecN::new2(tau, 0.0), &side_center),
            },
        ],
        endpoints: (Some(1), Some(0)),
    };
    let edges = alloc::vec![rim(0, h, 0), rim(1, 0.0, 1), seam];

    // each rim vertex: a straight-angle wedge on the cap plus the two
    // right-angle corners of the unrolled side
    let rim_vertex = |z: f64| -> Vertex {
        let at_cap = VecN::new2(1.0, 0.0);
        let cap_face = if z > 0.0 { 0 } else { 1 };
        let wedge_cap = VertexWedge {
            face: cap_face,
            at: at_cap,
            rays: [
                Segment::Arc { center: origin, radius: 1.0, ang_from: 0.0, ang_to: 0.5 },
                Segment::Arc { center: origin, radius: 1.0, ang_from: 0.0, ang_to: -0.5 },
            ],
        };
        let dz = if z > 0.0 { -1.0 } else { 1.0 };
        let side_wedge = |s: f64, ds: f64| VertexWedge {
            face: 2,
            at: VecN::new2(s, z),
            rays: [
                Segment::Line { from: VecN::new2(s, z), to: VecN::new2(s + ds, z) },
                Segment::Line { from: VecN::new2(s, z), to: VecN::new2(s, z + dz * h.min(1.0)) },
            ],
        };
        Vertex { wedges: alloc::vec![wedge_cap, side_wedge(0.0, 1.0), side_wedge(tau, -1.0)] }
    };
    let vertices = alloc::vec![rim_vertex(h), rim_vertex(0.0)];

    let s = PiecewiseSurface {
        name: String::from("cylinder-capped"),
        vertices,
        edges,
        faces,
        closed: true,
    };
    s.validate()?;
    Ok(s)
}

/// The dihedral example as a two-face local surface (not closed): flat
/// lower half-plane and a stretched upper one glued along the x-axis.
pub fn dihedral_surface() -> Result<PiecewiseSurface> {
    let mk_face = |name: &str, upper: bool| {
        let chart = Chart::new(name, BoxDomain::square(-2.0, 2.0).unwrap());
        let region = if upper {
            Region2::Rect(BoxDomain::new(&[-1.0, 0.0], &[1.0, 1.0]).unwrap())
        } else {
            Region2::Rect(BoxDomain::new(&[-1.0, -1.0], &[1.0, 0.0]).unwrap())
        };
        Face {
            chart: chart.clone(),
            metric: MetricField::new(chart, Regularity::Smooth, UndefinedSet::empty(), move |_| {
                Some(if upper { MatN::diag(&[1.0, 2.0]) } else { MatN::identity(2) })
            }),
            region,
        }
    };
    let faces = alloc::vec![mk_face("dihedral-lower", false), mk_face("dihedral-upper", true)];
    let a = VecN::new2(-1.0, 0.0);
    let b = VecN::new2(1.0, 0.0);
    let edges = alloc::vec![Edge {
        sides: [
            EdgeSide {
                face: 0,
                curve: Segment::Line { from: a, to: b },
                face_on_left: left_of(&b.sub(&a), &a, &VecN::new2(0.0, -0.5)),
            },
            EdgeSide {
                face: 1,
                curve: Segment::Line { from: a, to: b },
                face_on_left: left_of(&b.sub(&a), &a, &VecN::new2(0.0, 0.5)),
            },
        ],
        endpoints: (None, None),
    }];
    let s = PiecewiseSurface {
        name: String::from("dihedral"),
        vertices: Vec::new(),
        edges,
        faces,
        closed: false,
    };
    s.validate()?;
    Ok(s)
}
