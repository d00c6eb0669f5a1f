//! Surface-level identities: Gauss-Bonnet totals, the boundary identity,
//! curvature measures, and smoothed-measure convergence.

use geomolt_core::examples::{build_example, ExampleObject, Params};
use geomolt_core::geometry::BoxDomain;
use geomolt_core::linalg::VecN;
use geomolt_core::mollifier::SmoothParams;
use geomolt_core::surface::{
    ball_around_vertex, complement_of_vertex, cone_model, crease_model, face_box,
    gauss_bonnet_closed, gauss_bonnet_open, generator_axioms_check, measure_on_open,
    measure_smoothing_convergence, vertex_singleton, AdmissibleOpenSet, BoundaryPiece, EdgeSel,
    MeasureParams, PiecewiseSurface, Region2, SurfaceRegion,
};
use geomolt_core::transport::Segment;

fn surface(name: &str) -> PiecewiseSurface {
    let params = match name {
        "cylinder_capped" => Params::new().set("h", 1.0),
        _ => Params::new(),
    };
    match build_example(name, &params).unwrap() {
        ExampleObject::Surface(s) => s,
        _ => panic!("{name} is not a surface"),
    }
}

const PI: f64 = std::f64::consts::PI;
const TAU: f64 = std::f64::consts::TAU;

#[test]
fn gauss_bonnet_closed_cube_all_vertex_curvature() {
    let s = surface("cube");
    let (total, residual) = gauss_bonnet_closed(&s, MeasureParams::default()).unwrap();
    assert!((total - 4.0 * PI).abs() < 1e-8, "total {total}");
    assert!(residual.abs() < 1e-8, "residual {residual}");
}

#[test]
fn gauss_bonnet_closed_sphere_all_face_curvature() {
    let s = surface("sphere_octa");
    let (total, residual) = gauss_bonnet_closed(&s, MeasureParams::default()).unwrap();
    assert!((total - 4.0 * PI).abs() < 1e-3, "total {total}");
    assert!(residual.abs() < 1e-3, "residual {residual}");
}

#[test]
fn gauss_bonnet_closed_cylinder_all_edge_curvature() {
    let s = surface("cylinder_capped");
    let (total, residual) = gauss_bonnet_closed(&s, MeasureParams::default()).unwrap();
    assert!((total - 4.0 * PI).abs() < 1e-3, "total {total}");
    assert!(residual.abs() < 1e-3, "residual {residual}");
    // the two rims carry 2 pi each
    let mut rim_only = SurfaceRegion::empty();
    rim_only = rim_only.with_edge(0, EdgeSel::All).with_edge(1, EdgeSel::All);
    let m = measure_on_open(&s, &rim_only, MeasureParams::default()).unwrap();
    assert!((m.total() - 4.0 * PI).abs() < 1e-6);
}

#[test]
fn gauss_bonnet_closed_tetrahedron() {
    let s = surface("tetrahedron");
    let (total, residual) = gauss_bonnet_closed(&s, MeasureParams::default()).unwrap();
    assert!((total - 4.0 * PI).abs() < 1e-8, "total {total}");
    assert!(residual.abs() < 1e-8);
}

#[test]
fn gauss_bonnet_closed_rejects_open_surfaces() {
    let s = surface("dihedral_surface");
    assert!(gauss_bonnet_closed(&s, MeasureParams::default()).is_err());
}

#[test]
fn boundary_identity_geodesic_triangle_on_flat_face() {
    // triangle on a flat cube face: external angles sum to 2 pi exactly
    let s = surface("cube");
    let a = VecN::new2(0.2, 0.2);
    let b = VecN::new2(0.8, 0.3);
    let c = VecN::new2(0.4, 0.8);
    let set = AdmissibleOpenSet {
        interior: SurfaceRegion::empty().with_face(0, Region2::Triangle { a, b, c }),
        chi: 1,
        boundary: vec![
            BoundaryPiece { face: 0, seg: Segment::Line { from: a, to: b } },
            BoundaryPiece { face: 0, seg: Segment::Line { from: b, to: c } },
            BoundaryPiece { face: 0, seg: Segment::Line { from: c, to: a } },
        ],
    };
    let residual = gauss_bonnet_open(&s, &set, MeasureParams::default()).unwrap();
    assert!(residual.abs() < 1e-6, "residual {residual}");
}

#[test]
fn boundary_identity_spherical_cap() {
    // annulus between two latitudes on the round sphere, one face, chi = 0:
    // the latitude turning balances the enclosed curvature
    use geomolt_core::examples::sphere_patch_metric;
    use geomolt_core::geometry::Chart;
    use geomolt_core::surface::Face;
    let theta0 = PI / 3.0;
    let theta1 = PI / 2.0;
    let face = Face {
        chart: Chart::new("band", BoxDomain::new(&[0.4, -0.6], &[2.7, 6.9]).unwrap()),
        metric: sphere_patch_metric(),
        region: Region2::Rect(BoxDomain::new(&[0.45, 0.0], &[2.6, TAU]).unwrap()),
    };
    let band = PiecewiseSurface {
        name: "band".into(),
        vertices: vec![],
        edges: vec![],
        faces: vec![face],
        closed: false,
    };
    // both boundary circles oriented with the band on their left
    let set = AdmissibleOpenSet {
        interior: SurfaceRegion::empty().with_face(
            0,
            Region2::Rect(BoxDomain::new(&[theta0, 0.0], &[theta1, TAU]).unwrap()),
        ),
        chi: 0,
        boundary: vec![
            BoundaryPiece {
                face: 0,
                seg: Segment::Line { from: VecN::new2(theta0, TAU), to: VecN::new2(theta0, 0.0) },
            },
            BoundaryPiece {
                face: 0,
                seg: Segment::Line { from: VecN::new2(theta1, 0.0), to: VecN::new2(theta1, TAU) },
            },
        ],
    };
    let residual = gauss_bonnet_open(&band, &set, MeasureParams::default()).unwrap();
    assert!(residual.abs() < 1e-4, "residual {residual}");
    // the enclosed curvature equals the band area 2 pi cos(theta0)
    let interior =
        geomolt_core::surface::measure_on_open_exact(&band, &set.interior, MeasureParams::default())
            .unwrap();
    assert!((interior.total() - TAU * 0.5).abs() < 1e-6, "{}", interior.total());
}

#[test]
fn measure_cube_complement_of_vertex() {
    let s = surface("cube");
    let region = complement_of_vertex(&s, 3);
    let m = measure_on_open(&s, &region, MeasureParams::default()).unwrap();
    assert!(
        (m.total() - 3.5 * PI).abs() < 0.01 * 3.5 * PI,
        "complement measure {}",
        m.total()
    );
    // the vertex singleton carries the remaining pi/2
    let v = measure_on_open(&s, &vertex_singleton(&s, 3), MeasureParams::default()).unwrap();
    assert!((v.total() - PI / 2.0).abs() < 1e-9);
}

#[test]
fn measure_edge_arc_value() {
    let s = surface("cylinder_capped");
    // half of the top rim: K1 = 1 over length pi
    let region = SurfaceRegion::empty().with_edge(0, EdgeSel::Spans(vec![(0.0, 0.5)]));
    let m = measure_on_open(&s, &region, MeasureParams::default()).unwrap();
    assert!((m.total() - PI).abs() < 1e-8, "{}", m.total());
    assert!(m.minus.abs() < 1e-12);
}

#[test]
fn measure_decomposition_disjoint_strata() {
    // K(O) = K(O ∩ V) + K(O ∩ E) + K(O ∩ F) for a ball around a cube vertex
    let s = surface("cube");
    let ball = ball_around_vertex(&s, 0, 0.3);
    let whole = measure_on_open(&s, &ball, MeasureParams::default()).unwrap();
    let mut verts_only = ball.clone();
    verts_only.edges.clear();
    verts_only.faces.clear();
    let mut edges_only = ball.clone();
    edges_only.verts = geomolt_core::surface::VertexSel::None;
    edges_only.faces.clear();
    let mut faces_only = ball.clone();
    faces_only.verts = geomolt_core::surface::VertexSel::None;
    faces_only.edges.clear();
    let sum = measure_on_open(&s, &verts_only, MeasureParams::default()).unwrap().total()
        + measure_on_open(&s, &edges_only, MeasureParams::default()).unwrap().total()
        + measure_on_open(&s, &faces_only, MeasureParams::default()).unwrap().total();
    assert!((whole.total() - sum).abs() < 1e-12);
    assert!((whole.total() - PI / 2.0).abs() < 1e-9, "ball measure {}", whole.total());
}

#[test]
fn generator_axioms_on_sampled_pairs() {
    let s = surface("cube");
    // 50 pairs of boxes/disks on faces, including overlapping ones that
    // straddle nothing and pairs around a vertex
    let mut pairs = Vec::new();
    let mut k = 0u32;
    let mut next = move || {
        k = k.wrapping_mul(1664525).wrapping_add(1013904223);
        (k >> 8) as f64 / (1u32 << 24) as f64
    };
    for i in 0..50 {
        let f = i % 6;
        let (x0, y0) = (0.05 + 0.5 * next(), 0.05 + 0.5 * next());
        let (w1, h1) = (0.1 + 0.3 * next(), 0.1 + 0.3 * next());
        let (x1, y1) = (0.05 + 0.5 * next(), 0.05 + 0.5 * next());
        let r = 0.05 + 0.3 * next();
        let a = face_box(f, (x0, y0), ((x0 + w1).min(0.98), (y0 + h1).min(0.98))).unwrap();
        let b = SurfaceRegion::empty()
            .with_face(f, Region2::Disk { center: VecN::new2(x1, y1), radius: r });
        pairs.push((a, b));
    }
    // plus pairs of vertex balls sharing strata
    for v in 0..4 {
        pairs.push((ball_around_vertex(&s, v, 0.4), ball_around_vertex(&s, v, 0.25)));
    }
    let shrinking: Vec<SurfaceRegion> = (1..6)
        .map(|k| {
            let r = 0.4 / k as f64;
            ball_around_vertex(&s, 7, r)
        })
        .collect();
    let rep =
        generator_axioms_check(&s, &pairs, &shrinking, MeasureParams { face_nodes: 17, edge_nodes: 17 })
            .unwrap();
    assert!(rep.nonnegative);
    assert!(rep.valuation_defect < 1e-6, "valuation defect {}", rep.valuation_defect);
    assert!(rep.monotonicity_defect < 1e-9, "monotonicity {}", rep.monotonicity_defect);
    // vertex balls all contain the vertex: the measure does not vanish, but
    // the face/edge parts must shrink; check the trend of the tail
    assert!(rep.shrinking_tail.windows(2).all(|w| w[1] <= w[0] + 1e-9));
}

#[test]
fn disjoint_additivity_exact() {
    let s = surface("cube");
    let a = face_box(0, (0.1, 0.1), (0.3, 0.3)).unwrap();
    let b = face_box(0, (0.5, 0.5), (0.8, 0.8)).unwrap();
    let ma = measure_on_open(&s, &a, MeasureParams::default()).unwrap();
    let mb = measure_on_open(&s, &b, MeasureParams::default()).unwrap();
    let mu = measure_on_open(&s, &a.union(&b, 8), MeasureParams::default()).unwrap();
    assert!((mu.plus - ma.plus - mb.plus).abs() < 1e-8);
    assert!((mu.minus - ma.minus - mb.minus).abs() < 1e-8);
}

#[test]
fn smoothed_measure_converges_to_cone_defect() {
    // ball around a cube vertex in its cone chart: pi/2 within 1% at the
    // finest scale
    let model = cone_model(0.75, 1.0).unwrap();
    let region = Region2::Disk { center: VecN::new2(0.0, 0.0), radius: 0.3 };
    let table = measure_smoothing_convergence(
        &model,
        &region,
        &[0.2, 0.1, 0.05],
        0.6,
        SmoothParams::default(),
        PI / 2.0,
    )
    .unwrap();
    let last = table.rows.last().unwrap().1;
    let rel = ((last - PI / 2.0) / (PI / 2.0)).abs();
    assert!(rel < 0.01, "final {last}, rel {rel:.4}, rows {:?}", table.rows);
}

#[test]
fn smoothed_measure_converges_on_crease_window() {
    // window across the cap/side crease: expected K1 mass = window length
    let model = crease_model((1.5, 0.8)).unwrap();
    let region = Region2::Rect(BoxDomain::new(&[-0.5, -0.3], &[0.5, 0.3]).unwrap());
    let table = measure_smoothing_convergence(
        &model,
        &region,
        &[0.1, 0.05],
        0.7,
        SmoothParams::default(),
        1.0,
    )
    .unwrap();
    let last = table.rows.last().unwrap().1;
    assert!(((last - 1.0f64) / 1.0).abs() < 0.02, "rows {:?}", table.rows);
}

#[test]
fn smoothed_measure_smooth_interior_matches_face_curvature() {
    // a window strictly inside the smooth (cap) side: the smoothed integral
    // matches the flat face value 0
    let model = crease_model((1.5, 0.8)).unwrap();
    let region = Region2::Rect(BoxDomain::new(&[-0.4, -0.55], &[0.4, -0.25]).unwrap());
    let table = measure_smoothing_convergence(
        &model,
        &region,
        &[0.05],
        0.7,
        SmoothParams::default(),
        0.0,
    )
    .unwrap();
    assert!(table.rows[0].1.abs() < 1e-3, "rows {:?}", table.rows);
}
