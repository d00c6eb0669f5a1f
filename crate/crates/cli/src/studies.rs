//! Study implementations behind the CLI subcommands.

use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};

use geomolt_core::calculus::{c2_convergence_check, curvature, lk_measure, LkParams};
use geomolt_core::cantor::{
    cantor_theta, curvature_dimension, default_windows, CantorSphere, DimensionEstimate,
};
use geomolt_core::examples::{build_example, ExampleObject};
use geomolt_core::geometry::{
    build_covering, c0_norm, lp_norm, BoxDomain, ConstField, CoveringP, DiffField, MetricField,
    NormParams, SymField,
};
use geomolt_core::linalg::{MatN, VecN};
use geomolt_core::mollifier::{smooth_wrt_p, SmoothParams};
use geomolt_core::surface::{
    cone_model, crease_model, gauss_bonnet_closed, measure_on_open, measure_smoothing_convergence,
    MeasureParams, PiecewiseSurface, Region2, SurfaceRegion,
};
use geomolt_core::transport::{
    edge_angle_drift, length_limit, nonregular_distance, transport_limit, CrossingConfig,
    CurveSpec, DistanceParams, OdeParams, Verdict,
};

use crate::config::StudyConfig;
use crate::formats::{load_curve_csv, parse_region_expr};
use crate::report::{field_grid_rows, write_csv, Report};

fn field_example(cfg: &StudyConfig) -> Result<MetricField> {
    match build_example(&cfg.example, &cfg.core_params())? {
        ExampleObject::Field(f) => Ok(f),
        _ => bail!("example '{}' is not a metric field", cfg.example),
    }
}

fn surface_example(cfg: &StudyConfig) -> Result<PiecewiseSurface> {
    match build_example(&cfg.example, &cfg.core_params())? {
        ExampleObject::Surface(s) => Ok(s),
        _ => bail!("example '{}' is not a surface", cfg.example),
    }
}

/// Covering over a region compactly inside the field's chart.
fn covering_for(field: &MetricField, cfg: &StudyConfig) -> Result<(BoxDomain, CoveringP)> {
    let eps_max = cfg.eps.iter().cloned().fold(0.0f64, f64::max);
    let margin = (1.1 * eps_max + 0.02).max(0.1);
    let chart = &field.chart.domain;
    let dim = chart.dim();
    let lo: Vec<f64> = (0..dim).map(|k| chart.lo(k) + margin).collect();
    let hi: Vec<f64> = (0..dim).map(|k| chart.hi(k) - margin).collect();
    let dom = BoxDomain::new(&lo, &hi)?;
    let cell = cfg.opt_f64("cell", 0.5 * dom.extent(0).min(dom.extent(1)));
    let overlap = cfg.opt_f64("overlap", 0.2 * cell);
    let cov = geomolt_core::geometry::build_covering_with_margin(&dom, cell, overlap, margin)?;
    Ok((dom, cov))
}

fn reduce_verdict(v: &Verdict) -> String {
    match v {
        Verdict::Converged(x) => format!("converged({x:.6})"),
        Verdict::Diverging => "diverging".into(),
        Verdict::Oscillating { liminf, limsup } => {
            format!("oscillating({liminf:.6},{limsup:.6})")
        }
    }
}

/// `smooth`: error tables of the covering smoothing against the source,
/// plus sampled grids of the smoothed components.
pub fn run_smooth(cfg: &StudyConfig, out_dir: &Path) -> Result<Report> {
    use serde_json::json;
    let start = Instant::now();
    let field = field_example(cfg)?;
    if cfg.eps.is_empty() {
        bail!("empty eps list");
    }
    let (dom, cov) = covering_for(&field, cfg)?;
    let norm_params = NormParams { nodes_per_axis: cfg.grid.min(21) };
    let bg = ConstField(MatN::identity(2));
    let p_exp = cfg.opt_f64("p", 2.0);

    let mut c0_err = Vec::new();
    let mut lp_err = Vec::new();
    for &eps in &cfg.eps {
        let sm = smooth_wrt_p(&field, &cov, eps, SmoothParams::default())?;
        let diff = DiffField { a: &sm, b: &field };
        c0_err.push(c0_norm(&diff, &dom, &bg, norm_params)?);
        lp_err.push(lp_norm(&diff, &dom, p_exp, &bg, norm_params)?);
        for (i, j, name) in [(0, 0, "g11"), (0, 1, "g12"), (1, 1, "g22")] {
            let rows = field_grid_rows(&sm, &dom, cfg.grid, (i, j));
            write_csv(out_dir, &format!("smoothed_{name}_eps{eps}.csv"), "x,y,value", &rows)?;
        }
    }

    // the smooth study has its own report shape
    std::fs::create_dir_all(out_dir)?;
    let special = json!({
        "field": cfg.example,
        "mode": cfg.opt("mode", "covering"),
        "eps": cfg.eps,
        "c0_err": c0_err,
        "lp_err": lp_err,
        "wallclock_ms": start.elapsed().as_millis() as u64,
    });
    std::fs::write(out_dir.join("report.json"), serde_json::to_string_pretty(&special)?)?;

    let mut rep = Report::new("smooth", &cfg.example);
    rep.params = cfg.params.clone();
    rep.eps = cfg.eps.clone();
    rep.values = c0_err.clone();
    rep.residuals = lp_err.clone();
    rep.verdict = if c0_err.windows(2).all(|w| w[1] <= w[0]) {
        "decreasing".into()
    } else {
        "not-monotone".into()
    };
    rep.wallclock_ms = start.elapsed().as_millis();
    if let Some(&tol) = cfg.tolerances.get("c0_final") {
        rep.check("c0_final", *c0_err.last().unwrap(), tol);
    }
    let rows: Vec<Vec<f64>> = cfg
        .eps
        .iter()
        .zip(c0_err.iter().zip(&lp_err))
        .map(|(e, (c, l))| vec![*e, *c, *l])
        .collect();
    write_csv(out_dir, "errors.csv", "eps,c0_err,lp_err", &rows)?;
    Ok(rep)
}

/// `curvature`: smoothed connection/curvature errors and a degree-kappa
/// measure over a region.
pub fn run_curvature(cfg: &StudyConfig, out_dir: &Path) -> Result<Report> {
    let start = Instant::now();
    let field = field_example(cfg)?;
    let (dom, cov) = covering_for(&field, cfg)?;
    let n_probes = cfg.opt_usize("probes", 25);
    let probes: Vec<VecN> = (0..n_probes)
        .map(|i| {
            let u = (i % 5) as f64 / 4.0;
            let v = (i / 5) as f64 % 5.0 / 4.0;
            VecN::new2(
                dom.lo(0) + (0.1 + 0.8 * u) * dom.extent(0),
                dom.lo(1) + (0.1 + 0.8 * v.min(1.0)) * dom.extent(1),
            )
        })
        .collect();
    let rows = c2_convergence_check(&field, &cov, &cfg.eps, &probes, SmoothParams::default())?;

    let kappa = cfg.opt_usize("kappa", 2);
    let region = match cfg.options.get("region") {
        Some(expr) => match parse_region_expr(expr)? {
            Region2::Rect(b) => b,
            _ => bail!("curvature region must be a box"),
        },
        None => dom,
    };
    let lk = lk_measure(&field, &region, kappa, LkParams { nodes_per_axis: cfg.grid.min(33) })?;

    let mut rep = Report::new("curvature", &cfg.example);
    rep.params = cfg.params.clone();
    rep.eps = cfg.eps.clone();
    rep.values = rows.iter().map(|r| r.gamma_err).collect();
    rep.residuals = rows.iter().map(|r| r.curv_err).collect();
    rep.verdict = format!("lk{kappa}={lk:.9}");
    rep.wallclock_ms = start.elapsed().as_millis();
    if let Some(&tol) = cfg.tolerances.get("curv_final") {
        rep.check("curv_final", rows.last().unwrap().curv_err, tol);
    }
    let table: Vec<Vec<f64>> =
        rows.iter().map(|r| vec![r.epsilon, r.gamma_err, r.curv_err]).collect();
    write_csv(out_dir, "convergence.csv", "eps,gamma_err,curv_err", &table)?;
    rep.write(out_dir)?;
    Ok(rep)
}

/// `transport`: vanishing-scale parallel transport along a curve, with the
/// covering-independence cross-check and the edge-drift diagnostic.
pub fn run_transport(cfg: &StudyConfig, out_dir: &Path) -> Result<Report> {
    let start = Instant::now();
    let field = field_example(cfg)?;
    let curve = match cfg.options.get("curve") {
        Some(path) => load_curve_csv(Path::new(path))?,
        None => CurveSpec::line(VecN::new2(0.1, -0.5), VecN::new2(0.1, 0.5)),
    };
    let v0 = match cfg.options.get("vector") {
        Some(s) => {
            let parts: Vec<f64> =
                s.split(',').map(|t| t.trim().parse()).collect::<Result<_, _>>()?;
            VecN::new2(parts[0], parts[1])
        }
        None => VecN::new2(0.8, 0.6),
    };
    let tol = cfg.opt_f64("verdict_tol", 1e-2);
    let (_, cov_a) = covering_for(&field, cfg)?;
    let mut cfg_b = cfg.clone();
    cfg_b.options.insert("cell".into(), format!("{}", cfg.opt_f64("cell", 0.5) * 0.7));
    let (_, cov_b) = covering_for(&field, &cfg_b)?;

    let eps_min = cfg.eps.iter().cloned().fold(f64::INFINITY, f64::min);
    let ode = OdeParams { steps_per_unit: ((40.0 / eps_min) as usize).clamp(2000, 40_000) };
    let lim = transport_limit(
        &field,
        &cov_a,
        &cov_b,
        &curve,
        &v0,
        &cfg.eps,
        tol,
        ode,
        SmoothParams::coarse(),
    )?;

    // drift diagnostic across the default crossing
    let window = cfg.opt_f64("window", 5.0 * eps_min);
    let drift = edge_angle_drift(
        &field,
        &cov_a,
        &CrossingConfig {
            curve: curve.clone(),
            edge_dir: VecN::new2(1.0, 0.0),
            t_cross: 0.5,
            window,
        },
        &v0,
        eps_min,
        ode,
        SmoothParams::coarse(),
    );

    let mut rep = Report::new("transport", &cfg.example);
    rep.params = cfg.params.clone();
    rep.eps = cfg.eps.clone();
    rep.values = lim.per_eps.iter().map(|(_, v)| v.norm()).collect();
    rep.residuals = vec![lim.tail_diff, lim.covering_diff];
    rep.verdict = if lim.converged { "converged".into() } else { "not-converged".into() };
    rep.wallclock_ms = start.elapsed().as_millis();
    rep.check("tail_diff", lim.tail_diff, tol);
    rep.check("covering_diff", lim.covering_diff, tol);
    if let Ok(d) = drift {
        if let Some(&dt) = cfg.tolerances.get("drift") {
            rep.check("drift", d.angle_change, dt);
        } else {
            rep.warnings.push(format!("drift angle change {:.3e}", d.angle_change));
        }
    }
    let rows: Vec<Vec<f64>> =
        lim.per_eps.iter().map(|(e, v)| vec![*e, v[0], v[1]]).collect();
    write_csv(out_dir, "transported.csv", "eps,v1,v2", &rows)?;
    rep.write(out_dir)?;
    Ok(rep)
}

/// `distance`: the scale sweep of a point-pair distance (or of a fixed
/// curve length), classified by trend.
pub fn run_distance(cfg: &StudyConfig, out_dir: &Path) -> Result<Report> {
    let start = Instant::now();
    let field = field_example(cfg)?;
    let (dom, cov) = covering_for(&field, cfg)?;
    let parse_point = |key: &str, default: (f64, f64)| -> VecN {
        cfg.options
            .get(key)
            .and_then(|s| {
                let parts: Vec<f64> =
                    s.split(',').filter_map(|t| t.trim().parse().ok()).collect();
                (parts.len() == 2).then(|| VecN::new2(parts[0], parts[1]))
            })
            .unwrap_or(VecN::new2(default.0, default.1))
    };
    let a = parse_point("from", (0.0, dom.lo(1) + 0.05 * dom.extent(1)));
    let b = parse_point("to", (0.0, dom.hi(1) - 0.05 * dom.extent(1)));

    let est = if cfg.opt("mode", "distance") == "length" {
        let curve = CurveSpec::line(a, b);
        length_limit(&field, &cov, &curve, &cfg.eps, 33, SmoothParams::coarse())?
    } else {
        nonregular_distance(
            &field,
            &cov,
            &dom,
            &a,
            &b,
            &cfg.eps,
            DistanceParams {
                initial_grid: cfg.grid,
                refine_rtol: 0.01,
                max_grid: 4 * cfg.grid,
            },
            SmoothParams::coarse(),
        )?
    };

    let mut rep = Report::new("distance", &cfg.example);
    rep.params = cfg.params.clone();
    rep.eps = est.per_eps.iter().map(|(e, _)| *e).collect();
    rep.values = est.per_eps.iter().map(|(_, d)| *d).collect();
    rep.verdict = reduce_verdict(&est.verdict);
    rep.wallclock_ms = start.elapsed().as_millis();
    if let Some(&tol) = cfg.tolerances.get("final") {
        rep.check("final", *rep.values.last().unwrap(), tol);
    }
    if let Some(&gap) = cfg.tolerances.get("oscillation_gap") {
        let measured = match est.verdict {
            Verdict::Oscillating { liminf, limsup } => limsup - liminf,
            _ => 0.0,
        };
        // a lower bound: pass when measured >= gap
        let passed = measured >= gap;
        rep.checks.insert(
            "oscillation_gap".into(),
            crate::report::CheckOutcome { measured, allowed: gap, passed },
        );
    }
    let rows: Vec<Vec<f64>> = est.per_eps.iter().map(|(e, d)| vec![*e, *d]).collect();
    write_csv(out_dir, "sweep.csv", "eps,value", &rows)?;
    rep.write(out_dir)?;
    Ok(rep)
}

/// `measure`: curvature measures of surface regions, Gauss-Bonnet totals,
/// and smoothed-measure convergence on the local feature models.
pub fn run_measure(cfg: &StudyConfig, out_dir: &Path) -> Result<Report> {
    let start = Instant::now();
    let surface = surface_example(cfg)?;
    let params = MeasureParams { face_nodes: cfg.grid, edge_nodes: cfg.grid };

    let mut rep = Report::new("measure", &cfg.example);
    rep.params = cfg.params.clone();
    rep.wallclock_ms = 0;

    if surface.closed {
        let (total, residual) = gauss_bonnet_closed(&surface, params)?;
        rep.values.push(total);
        rep.residuals.push(residual);
        if let Some(&tol) = cfg.tolerances.get("gb_residual") {
            rep.check("gb_residual", residual.abs(), tol);
        }
    }

    // region selection: a chart-region expression on one face, or a named
    // construction
    let region = match cfg.options.get("set") {
        Some(expr) if expr == "complement-of-vertex" => {
            geomolt_core::surface::complement_of_vertex(&surface, cfg.opt_usize("vertex", 0))
        }
        Some(expr) if expr == "vertex-ball" => geomolt_core::surface::ball_around_vertex(
            &surface,
            cfg.opt_usize("vertex", 0),
            cfg.opt_f64("radius", 0.3),
        ),
        Some(expr) => {
            let face = cfg.opt_usize("face", 0);
            SurfaceRegion::empty().with_face(face, parse_region_expr(expr)?)
        }
        None => SurfaceRegion::everything(surface.edges.len(), surface.faces.len()),
    };
    let m = measure_on_open(&surface, &region, params)?;
    rep.values.push(m.plus);
    rep.values.push(m.minus);
    rep.values.push(m.total());
    rep.verdict = format!("measure({:+.6})", m.total());
    if let Some(&want) = cfg.tolerances.get("measure_total") {
        let tol = cfg.tolerances.get("measure_rtol").copied().unwrap_or(0.01);
        rep.check("measure_total", (m.total() - want).abs(), tol * want.abs().max(1e-12));
    }

    // optional smoothed-measure convergence on a local model
    match cfg.opt("local_model", "").as_str() {
        "cone" => {
            let alpha = cfg.params.get("alpha").copied().unwrap_or(0.75);
            let model = cone_model(alpha, 1.0)?;
            let region = Region2::Disk {
                center: VecN::new2(0.0, 0.0),
                radius: cfg.opt_f64("radius", 0.3),
            };
            let table = measure_smoothing_convergence(
                &model,
                &region,
                &cfg.eps,
                0.6,
                SmoothParams::default(),
                model.expected_density,
            )?;
            rep.eps = table.rows.iter().map(|r| r.0).collect();
            rep.residuals = table
                .rows
                .iter()
                .map(|r| (r.1 - table.expected) / table.expected)
                .collect();
            let rows: Vec<Vec<f64>> = table.rows.iter().map(|r| vec![r.0, r.1]).collect();
            write_csv(out_dir, "smoothed_measure.csv", "eps,value", &rows)?;
            if let Some(&tol) = cfg.tolerances.get("smoothed_rel") {
                rep.check("smoothed_rel", rep.residuals.last().unwrap().abs(), tol);
            }
        }
        "crease" => {
            let model = crease_model((1.5, 0.8))?;
            let w = cfg.opt_f64("window", 0.5);
            let region = Region2::Rect(BoxDomain::new(&[-w, -0.3], &[w, 0.3])?);
            let table = measure_smoothing_convergence(
                &model,
                &region,
                &cfg.eps,
                0.7,
                SmoothParams::default(),
                2.0 * w * model.expected_density,
            )?;
            rep.eps = table.rows.iter().map(|r| r.0).collect();
            rep.residuals = table
                .rows
                .iter()
                .map(|r| (r.1 - table.expected) / table.expected)
                .collect();
            if let Some(&tol) = cfg.tolerances.get("smoothed_rel") {
                rep.check("smoothed_rel", rep.residuals.last().unwrap().abs(), tol);
            }
        }
        _ => {}
    }

    rep.wallclock_ms = start.elapsed().as_millis();
    rep.write(out_dir)?;
    Ok(rep)
}

/// `cantor`: closure and length of the turning curve, dimension slopes,
/// and the revolution sphere's total and off-orbit curvature.
pub fn run_cantor(cfg: &StudyConfig, out_dir: &Path) -> Result<Report> {
    let start = Instant::now();
    let n = cfg.params.get("n").copied().unwrap_or((1u32 << 18) as f64) as usize;
    let sphere = CantorSphere::build(n)?;
    let curve = &sphere.curve;

    let mut rep = Report::new("cantor", "cantor_sphere");
    rep.params = cfg.params.clone();
    rep.values.push(curve.closure_defect());
    rep.values.push(curve.polygonal_length());

    // dimension slopes at a smooth point, a Cantor point, and a corner-like
    // reference profile
    let theta = |t: f64| cantor_theta(t);
    let windows = default_windows();
    let slope_at = |p: f64| -> f64 {
        match curvature_dimension(&theta, p, &windows) {
            DimensionEstimate::Slope(s) => s,
            DimensionEstimate::Flat => 0.0,
        }
    };
    let cantor_slope = slope_at(3.0 / 16.0);
    rep.values.push(cantor_slope);
    if let Some(&tol) = cfg.tolerances.get("dimension") {
        let want = std::f64::consts::LN_2 / 3.0f64.ln();
        rep.check("dimension", (cantor_slope - want).abs(), tol);
    }
    if let Some(&tol) = cfg.tolerances.get("closure") {
        rep.check("closure", curve.closure_defect(), tol);
    }

    // smoothed total curvature of the revolution surface
    let eps = cfg.eps.last().copied().unwrap_or(2e-3);
    let collar = cfg.opt_f64("collar", 1e-3).max(2.0 * eps);
    let total = sphere.total_curvature_smoothed(eps, collar);
    let off = sphere.off_orbit_mass_fraction(eps, collar, 1e-3);
    rep.values.push(total);
    rep.values.push(off);
    rep.verdict = format!("total({total:.6})");
    if let Some(&tol) = cfg.tolerances.get("total_rel") {
        rep.check(
            "total_rel",
            (total - 4.0 * std::f64::consts::PI).abs() / (4.0 * std::f64::consts::PI),
            tol,
        );
    }
    if let Some(&tol) = cfg.tolerances.get("off_orbit") {
        rep.check("off_orbit", off, tol);
    }

    // theta profile table
    let rows: Vec<Vec<f64>> = (0..=1000)
        .map(|i| {
            let t = i as f64 / 1000.0;
            vec![t, cantor_theta(t)]
        })
        .collect();
    write_csv(out_dir, "theta.csv", "t,theta", &rows)?;
    rep.wallclock_ms = start.elapsed().as_millis();
    rep.write(out_dir)?;
    Ok(rep)
}

/// Dispatch a study by name.
pub fn run_study(cfg: &StudyConfig, out_dir: &Path) -> Result<Report> {
    match cfg.study.as_str() {
        "smooth" => run_smooth(cfg, out_dir),
        "curvature" => run_curvature(cfg, out_dir),
        "transport" => run_transport(cfg, out_dir),
        "distance" => run_distance(cfg, out_dir),
        "measure" => run_measure(cfg, out_dir),
        "cantor" => run_cantor(cfg, out_dir),
        other => Err(anyhow!("unknown study '{other}'")),
    }
    .with_context(|| format!("study '{}' on example '{}'", cfg.study, cfg.example))
}

/// Helper shared with the suite: a covering over a box with explicit
/// parameters.
pub fn covering_on(
    lo: (f64, f64),
    hi: (f64, f64),
    cell: f64,
    overlap: f64,
    margin: f64,
) -> Result<(BoxDomain, CoveringP)> {
    let dom = BoxDomain::new(&[lo.0, lo.1], &[hi.0, hi.1])?;
    let cov = geomolt_core::geometry::build_covering_with_margin(&dom, cell, overlap, margin)?;
    Ok((dom, cov))
}

/// Plain covering with the default margin.
pub fn default_covering(lo: (f64, f64), hi: (f64, f64), cell: f64, overlap: f64) -> Result<CoveringP> {
    let dom = BoxDomain::new(&[lo.0, lo.1], &[hi.0, hi.1])?;
    Ok(build_covering(&dom, cell, overlap)?)
}

/// Max |K_eps - k_ref| of the covering-smoothed metric at the probes.
pub fn max_curvature_error(
    field: &MetricField,
    cov: &CoveringP,
    eps: f64,
    probes: &[VecN],
    k_ref: f64,
) -> Result<f64> {
    let sm = smooth_wrt_p(field, cov, eps, SmoothParams::default())?;
    let mut worst = 0.0f64;
    for p in probes {
        let k = curvature(&sm, p)?.gaussian.expect("2d");
        worst = worst.max((k - k_ref).abs());
    }
    Ok(worst)
}
