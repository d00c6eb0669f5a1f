//! Connection/curvature convergence of the smoothed family and the
//! degree-2 curvature form on smoothed metrics.

use geomolt_core::calculus::{c2_convergence_check, curvature, lk_measure, LkParams};
use geomolt_core::examples::{cone_metric, sphere_patch_metric};
use geomolt_core::geometry::{build_covering, BoxDomain, MetricSource};
use geomolt_core::linalg::VecN;
use geomolt_core::mollifier::{smooth_wrt_p, SmoothParams};
use geomolt_core::quadrature::BoxRule;

#[test]
fn sphere_patch_connection_and_curvature_converge() {
    let g = sphere_patch_metric();
    let dom = BoxDomain::new(&[0.8, 0.2], &[2.3, 2.0]).unwrap();
    let cov = build_covering(&dom, 0.8, 0.16).unwrap();
    let probes: Vec<VecN> = (0..25)
        .map(|i| {
            let u = (i % 5) as f64 / 4.0;
            let v = (i / 5) as f64 / 4.0;
            VecN::new2(1.0 + u * 1.1, 0.4 + v * 1.4)
        })
        .collect();
    let rows = c2_convergence_check(
        &g,
        &cov,
        &[0.2, 0.1, 0.05],
        &probes,
        SmoothParams::default(),
    )
    .unwrap();
    // both error columns decrease monotonically
    for w in rows.windows(2) {
        assert!(w[1].gamma_err < w[0].gamma_err, "{rows:?}");
        assert!(w[1].curv_err < w[0].curv_err, "{rows:?}");
    }
    // second-order kernel: errors shrink ~4x per halving
    let r1 = rows[0].gamma_err / rows[1].gamma_err;
    let r2 = rows[1].gamma_err / rows[2].gamma_err;
    assert!((3.0..5.0).contains(&r1), "ratio {r1}");
    assert!((3.0..5.0).contains(&r2), "ratio {r2}");
    // smoothed curvature lands close to the round value at the finest scale
    let sm = smooth_wrt_p(&g, &cov, 0.05, SmoothParams::default()).unwrap();
    for p in &probes {
        let k = curvature(&sm, p).unwrap().gaussian.unwrap();
        assert!((k - 1.0).abs() <= 0.05, "K_eps = {k}");
    }
}

#[test]
fn flat_metric_errors_at_noise_floor() {
    let g = geomolt_core::examples::flat_metric();
    let dom = BoxDomain::square(-0.5, 0.5).unwrap();
    let cov = build_covering(&dom, 0.5, 0.1).unwrap();
    let probes = vec![VecN::new2(0.1, -0.2), VecN::new2(-0.3, 0.4)];
    let rows =
        c2_convergence_check(&g, &cov, &[0.2, 0.1], &probes, SmoothParams::default()).unwrap();
    for row in rows {
        assert!(row.gamma_err < 1e-8, "{row:?}");
        assert!(row.curv_err < 1e-8, "{row:?}");
    }
}

#[test]
fn hyperbolic_patch_curvature_error_rate() {
    let g = geomolt_core::examples::hyperbolic_patch_metric();
    let dom = BoxDomain::square(-0.5, 0.5).unwrap();
    let cov = build_covering(&dom, 0.5, 0.1).unwrap();
    let probes = vec![VecN::new2(0.0, 0.0), VecN::new2(0.2, -0.1)];
    let rows = c2_convergence_check(
        &g,
        &cov,
        &[0.1, 0.05, 0.025],
        &probes,
        SmoothParams::default(),
    )
    .unwrap();
    // |K_eps + 1| shrinks by the kernel's second-order factor per halving
    let r = rows[0].curv_err / rows[1].curv_err;
    assert!((2.5..6.0).contains(&r), "rate {r}, rows {rows:?}");
}

#[test]
fn lk_ratio_constant_includes_smoothed_cone() {
    // the degree-2 density over total curvature is the same constant for
    // closed-form patches and for the smoothed cone-tip metric
    let ratio_of = |metric: &dyn MetricSource, region: &BoxDomain| -> f64 {
        let lk = lk_measure(metric, region, 2, LkParams { nodes_per_axis: 17 }).unwrap();
        let rule = BoxRule::new(region, 17);
        let total_k = rule.integrate(|x| {
            let c = curvature(metric, x).unwrap();
            c.gaussian.unwrap() * c.metric.det().sqrt()
        });
        lk / total_k
    };
    let sphere = sphere_patch_metric();
    let region_s = BoxDomain::new(&[0.9, 1.0], &[1.7, 1.8]).unwrap();
    let r_sphere = ratio_of(&sphere, &region_s);

    let cone = cone_metric(0.75);
    let dom = BoxDomain::square(-0.6, 0.6).unwrap();
    let cov = build_covering(&dom, 0.6, 0.12).unwrap();
    let smoothed = smooth_wrt_p(&cone, &cov, 0.15, SmoothParams::default()).unwrap();
    // a region near (but not centered on) the tip where K_eps is sizable
    let region_c = BoxDomain::new(&[0.02, 0.02], &[0.2, 0.2]).unwrap();
    let r_cone = ratio_of(&smoothed, &region_c);

    assert!(
        ((r_sphere - r_cone) / r_sphere).abs() < 1e-6,
        "{r_sphere} vs {r_cone}"
    );
    // record the measured constant: -1/(2 pi) under this sign convention
    let expected = -1.0 / core::f64::consts::TAU;
    assert!((r_sphere - expected).abs() < 1e-6, "{r_sphere}");
}
