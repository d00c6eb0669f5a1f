//! Structured-text (TOML) file formats for fields, coverings, surfaces, and
//! curves, with bit-exact round-trips for everything the registry builds.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use geomolt_core::examples::{build_example, gnomonic_metric_field, ExampleObject, Params};
use geomolt_core::geometry::{
    build_covering_with_margin, BoxDomain, Chart, CoveringP, MetricField, Regularity,
    UndefinedSet,
};
use geomolt_core::linalg::{MatN, VecN};
use geomolt_core::surface::{Edge, EdgeSide, Face, PiecewiseSurface, Region2, Vertex, VertexWedge};
use geomolt_core::transport::{CurveSpec, Segment};

// ------------------------------------------------------------- primitives

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BoxDoc {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxDoc {
    pub fn from(b: &BoxDomain) -> Self {
        let d = b.dim();
        BoxDoc {
            lo: (0..d).map(|k| b.lo(k)).collect(),
            hi: (0..d).map(|k| b.hi(k)).collect(),
        }
    }

    pub fn build(&self) -> Result<BoxDomain> {
        Ok(BoxDomain::new(&self.lo, &self.hi)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SegmentDoc {
    Line { from: [f64; 2], to: [f64; 2] },
    Arc { center: [f64; 2], radius: f64, ang_from: f64, ang_to: f64 },
}

impl SegmentDoc {
    pub fn from(s: &Segment) -> Self {
        match s {
            Segment::Line { from, to } => SegmentDoc::Line {
                from: [from[0], from[1]],
                to: [to[0], to[1]],
            },
            Segment::Arc { center, radius, ang_from, ang_to } => SegmentDoc::Arc {
                center: [center[0], center[1]],
                radius: *radius,
                ang_from: *ang_from,
                ang_to: *ang_to,
            },
        }
    }

    pub fn build(&self) -> Segment {
        match self {
            SegmentDoc::Line { from, to } => Segment::Line {
                from: VecN::new2(from[0], from[1]),
                to: VecN::new2(to[0], to[1]),
            },
            SegmentDoc::Arc { center, radius, ang_from, ang_to } => Segment::Arc {
                center: VecN::new2(center[0], center[1]),
                radius: *radius,
                ang_from: *ang_from,
                ang_to: *ang_to,
            },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegionDoc {
    All,
    Rect { rect: BoxDoc },
    Disk { center: [f64; 2], radius: f64 },
    Triangle { a: [f64; 2], b: [f64; 2], c: [f64; 2] },
}

impl RegionDoc {
    pub fn from(r: &Region2) -> Result<Self> {
        Ok(match r {
            Region2::All => RegionDoc::All,
            Region2::Rect(b) => RegionDoc::Rect { rect: BoxDoc::from(b) },
            Region2::Disk { center, radius } => {
                RegionDoc::Disk { center: [center[0], center[1]], radius: *radius }
            }
            Region2::Triangle { a, b, c } => RegionDoc::Triangle {
                a: [a[0], a[1]],
                b: [b[0], b[1]],
                c: [c[0], c[1]],
            },
            _ => bail!("composite regions have no file form"),
        })
    }

    pub fn build(&self) -> Result<Region2> {
        Ok(match self {
            RegionDoc::All => Region2::All,
            RegionDoc::Rect { rect } => Region2::Rect(rect.build()?),
            RegionDoc::Disk { center, radius } => {
                Region2::Disk { center: VecN::new2(center[0], center[1]), radius: *radius }
            }
            RegionDoc::Triangle { a, b, c } => Region2::Triangle {
                a: VecN::new2(a[0], a[1]),
                b: VecN::new2(b[0], b[1]),
                c: VecN::new2(c[0], c[1]),
            },
        })
    }
}

// ------------------------------------------------------------------ fields

/// A metric field document: either a registry example (with parameters) or
/// one of the named closed forms used by surface faces.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FieldDoc {
    pub name: String,
    #[serde(default)]
    pub params: Vec<(String, f64)>,
}

impl FieldDoc {
    pub fn example(name: &str, params: &Params) -> Self {
        FieldDoc {
            name: name.into(),
            params: params.entries().to_vec(),
        }
    }

    pub fn build_field(&self) -> Result<MetricField> {
        let mut p = Params::new();
        for (k, v) in &self.params {
            p = p.set(k, *v);
        }
        match build_example(&self.name, &p)? {
            ExampleObject::Field(f) => Ok(f),
            _ => bail!("example '{}' is not a metric field", self.name),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, toml::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(toml::from_str(&std::fs::read_to_string(path)?)?)
    }
}

/// Face metrics are referenced by name in surface files.
fn face_metric(name: &str, params: &[f64], chart: Chart) -> Result<MetricField> {
    Ok(match name {
        "flat" => MetricField::new(chart, Regularity::Smooth, UndefinedSet::empty(), |_| {
            Some(MatN::identity(2))
        }),
        "const-diag" => {
            let (a, b) = (params[0], params[1]);
            MetricField::new(chart, Regularity::Smooth, UndefinedSet::empty(), move |_| {
                Some(MatN::diag(&[a, b]))
            })
        }
        "gnomonic" => gnomonic_metric_field(chart),
        other => bail!("unknown face metric '{other}'"),
    })
}

fn face_metric_name(face: &Face) -> Result<(String, Vec<f64>)> {
    // identify by the chart id conventions of the registry builders
    let id = &face.chart.id;
    if id.starts_with("octant") {
        return Ok(("gnomonic".into(), vec![]));
    }
    // probe: a constant diagonal metric is characterized by one sample
    let c = face.chart.domain.center();
    let m = face.metric.eval(&c)?;
    if (m.get(0, 0) - 1.0).abs() < 1e-15 && (m.get(1, 1) - 1.0).abs() < 1e-15 {
        Ok(("flat".into(), vec![]))
    } else {
        Ok(("const-diag".into(), vec![m.get(0, 0), m.get(1, 1)]))
    }
}

// ---------------------------------------------------------------- surfaces

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct WedgeDoc {
    pub face: usize,
    pub at: [f64; 2],
    pub rays: Vec<SegmentDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct VertexDoc {
    pub id: usize,
    /// Incident faces, one per wedge.
    pub faces: Vec<usize>,
    pub wedges: Vec<WedgeDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EdgeSideDoc {
    pub face: usize,
    pub curve: SegmentDoc,
    pub face_on_left: bool,
    /// Sampled points along the arc, for inspection.
    pub samples: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EdgeDoc {
    pub id: usize,
    pub faces: [usize; 2],
    pub sides: Vec<EdgeSideDoc>,
    pub start_vertex: Option<usize>,
    pub end_vertex: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FaceDoc {
    pub id: usize,
    pub chart_id: String,
    pub chart: BoxDoc,
    pub metric: String,
    #[serde(default)]
    pub metric_params: Vec<f64>,
    pub region: RegionDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SurfaceDoc {
    pub name: String,
    /// Faces are listed with the orientation of their charts.
    pub orientation: String,
    pub closed: bool,
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<EdgeDoc>,
    pub faces: Vec<FaceDoc>,
}

const EDGE_SAMPLES: usize = 9;

impl SurfaceDoc {
    pub fn from(s: &PiecewiseSurface) -> Result<Self> {
        let mut faces = Vec::new();
        for (i, f) in s.faces.iter().enumerate() {
            let (metric, metric_params) = face_metric_name(f)?;
            faces.push(FaceDoc {
                id: i,
                chart_id: f.chart.id.clone(),
                chart: BoxDoc::from(&f.chart.domain),
                metric,
                metric_params,
                region: RegionDoc::from(&f.region)?,
            });
        }
        let mut edges = Vec::new();
        for (i, e) in s.edges.iter().enumerate() {
            let sides: Vec<EdgeSideDoc> = e
                .sides
                .iter()
                .map(|side| {
                    let samples = (0..EDGE_SAMPLES)
                        .map(|k| {
                            let t = k as f64 / (EDGE_SAMPLES - 1) as f64;
                            let p = side.curve.point(t);
                            [p[0], p[1]]
                        })
                        .collect();
                    EdgeSideDoc {
                        face: side.face,
                        curve: SegmentDoc::from(&side.curve),
                        face_on_left: side.face_on_left,
                        samples,
                    }
                })
                .collect();
            edges.push(EdgeDoc {
                id: i,
                faces: [e.sides[0].face, e.sides[1].face],
                sides,
                start_vertex: e.endpoints.0,
                end_vertex: e.endpoints.1,
            });
        }
        let mut vertices = Vec::new();
        for (i, v) in s.vertices.iter().enumerate() {
            vertices.push(VertexDoc {
                id: i,
                faces: v.wedges.iter().map(|w| w.face).collect(),
                wedges: v
                    .wedges
                    .iter()
                    .map(|w| WedgeDoc {
                        face: w.face,
                        at: [w.at[0], w.at[1]],
                        rays: w.rays.iter().map(SegmentDoc::from).collect(),
                    })
                    .collect(),
            });
        }
        Ok(SurfaceDoc {
            name: s.name.clone(),
            orientation: "chart-standard".into(),
            closed: s.closed,
            vertices,
            edges,
            faces,
        })
    }

    pub fn build(&self) -> Result<PiecewiseSurface> {
        let mut faces = Vec::new();
        for f in &self.faces {
            let chart = Chart::new(f.chart_id.clone(), f.chart.build()?);
            faces.push(Face {
                chart: chart.clone(),
                metric: face_metric(&f.metric, &f.metric_params, chart)?,
                region: f.region.build()?,
            });
        }
        let mut edges = Vec::new();
        for e in &self.edges {
            if e.sides.len() != 2 {
                bail!("edge {} needs exactly two sides", e.id);
            }
            let mk = |d: &EdgeSideDoc| EdgeSide {
                face: d.face,
                curve: d.curve.build(),
                face_on_left: d.face_on_left,
            };
            edges.push(Edge {
                sides: [mk(&e.sides[0]), mk(&e.sides[1])],
                endpoints: (e.start_vertex, e.end_vertex),
            });
        }
        let mut vertices = Vec::new();
        for v in &self.vertices {
            vertices.push(Vertex {
                wedges: v
                    .wedges
                    .iter()
                    .map(|w| VertexWedge {
                        face: w.face,
                        at: VecN::new2(w.at[0], w.at[1]),
                        rays: [w.rays[0].build(), w.rays[1].build()],
                    })
                    .collect(),
            });
        }
        let s = PiecewiseSurface {
            name: self.name.clone(),
            vertices,
            edges,
            faces,
            closed: self.closed,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, toml::to_string_pretty(self)?)
            .with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(toml::from_str(&std::fs::read_to_string(path)?)?)
    }
}

// --------------------------------------------------------------- coverings

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CoveringChartDoc {
    /// Bump support box.
    pub inner: BoxDoc,
    /// Box the smoothing integral may read from.
    pub outer: BoxDoc,
    /// Euclidean background is `scale^2` times the identity.
    pub background_scale: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CoveringDoc {
    pub domain: BoxDoc,
    pub cell_size: f64,
    pub overlap: f64,
    pub margin: f64,
    pub charts: Vec<CoveringChartDoc>,
}

impl CoveringDoc {
    pub fn from(c: &CoveringP) -> Self {
        let margin = c.min_margin();
        CoveringDoc {
            domain: BoxDoc::from(&c.domain),
            cell_size: c.cell_size,
            overlap: c.overlap,
            margin,
            charts: c
                .charts()
                .iter()
                .map(|ch| CoveringChartDoc {
                    inner: BoxDoc::from(&ch.inner),
                    outer: BoxDoc::from(&ch.outer),
                    background_scale: ch.background_scale,
                })
                .collect(),
        }
    }

    pub fn build(&self) -> Result<CoveringP> {
        let c = build_covering_with_margin(
            &self.domain.build()?,
            self.cell_size,
            self.overlap,
            self.margin,
        )?;
        // the chart listing must agree with what the parameters rebuild
        let rebuilt = CoveringDoc::from(&c);
        if rebuilt.charts != self.charts {
            bail!("covering listing does not match its build parameters");
        }
        Ok(c)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, toml::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(toml::from_str(&std::fs::read_to_string(path)?)?)
    }
}

// ------------------------------------------------------------------ curves

/// Curve files are CSV: one row per segment,
/// `line,x0,y0,x1,y1` or `arc,cx,cy,r,ang0,ang1`, with breakpoints implied
/// uniformly, plus an optional trailing `transversal` flag column.
pub fn load_curve_csv(path: &Path) -> Result<CurveSpec> {
    let text = std::fs::read_to_string(path)?;
    let mut segments = Vec::new();
    let mut transversal = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("kind") {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let parse = |s: &str| -> Result<f64> {
            s.parse::<f64>().with_context(|| format!("line {}: bad number '{s}'", lineno + 1))
        };
        match cols[0] {
            "line" => {
                segments.push(Segment::Line {
                    from: VecN::new2(parse(cols[1])?, parse(cols[2])?),
                    to: VecN::new2(parse(cols[3])?, parse(cols[4])?),
                });
                if cols.len() > 5 {
                    transversal.push(cols[5] == "1" || cols[5] == "true");
                }
            }
            "arc" => {
                segments.push(Segment::Arc {
                    center: VecN::new2(parse(cols[1])?, parse(cols[2])?),
                    radius: parse(cols[3])?,
                    ang_from: parse(cols[4])?,
                    ang_to: parse(cols[5])?,
                });
                if cols.len() > 6 {
                    transversal.push(cols[6] == "1" || cols[6] == "true");
                }
            }
            other => bail!("line {}: unknown segment kind '{other}'", lineno + 1),
        }
    }
    if segments.is_empty() {
        bail!("curve file has no segments");
    }
    let n = segments.len();
    let breakpoints = (0..=n).map(|i| i as f64 / n as f64).collect();
    transversal.resize(n.saturating_sub(1), false);
    let curve = CurveSpec { breakpoints, segments, transversal };
    curve.validate()?;
    Ok(curve)
}

/// Parse a region expression: unions (`+`), intersections (`&`) and
/// differences (`-`) of `box(x0,y0,x1,y1)`, `disk(cx,cy,r)`, and `all`,
/// evaluated left to right.
pub fn parse_region_expr(expr: &str) -> Result<Region2> {
    let mut acc: Option<Region2> = None;
    let mut op = '+';
    let mut rest = expr.trim();
    while !rest.is_empty() {
        if let Some(c) = rest.chars().next() {
            if c == '+' || c == '&' || c == '-' {
                op = c;
                rest = rest[1..].trim_start();
                continue;
            }
        }
        let (prim, tail) = parse_primitive(rest)?;
        rest = tail.trim_start();
        acc = Some(match acc {
            None => prim,
            Some(a) => match op {
                '+' => a.union(prim),
                '&' => a.intersect(prim),
                '-' => a.diff(prim),
                _ => unreachable!(),
            },
        });
    }
    acc.ok_or_else(|| anyhow::anyhow!("empty region expression"))
}

fn parse_primitive(s: &str) -> Result<(Region2, &str)> {
    if let Some(rest) = s.strip_prefix("all") {
        return Ok((Region2::All, rest));
    }
    let (name, after) = s
        .split_once('(')
        .with_context(|| format!("expected a region primitive at '{s}'"))?;
    let (args, rest) = after
        .split_once(')')
        .with_context(|| format!("missing ')' in region expression at '{s}'"))?;
    let nums: Result<Vec<f64>> = args
        .split(',')
        .map(|t| t.trim().parse::<f64>().with_context(|| format!("bad number '{t}'")))
        .collect();
    let nums = nums?;
    let region = match (name.trim(), nums.len()) {
        ("box", 4) => Region2::Rect(BoxDomain::new(&[nums[0], nums[1]], &[nums[2], nums[3]])?),
        ("disk", 3) => Region2::Disk { center: VecN::new2(nums[0], nums[1]), radius: nums[2] },
        (other, n) => bail!("unknown primitive '{other}' with {n} arguments"),
    };
    Ok((region, rest))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_expressions() {
        let r = parse_region_expr("box(0,0,1,1) - disk(0.5,0.5,0.2)").unwrap();
        assert!(r.contains(&VecN::new2(0.1, 0.1)));
        assert!(!r.contains(&VecN::new2(0.5, 0.5)));
        let r = parse_region_expr("disk(0,0,1) & box(0,-1,1,1)").unwrap();
        assert!(r.contains(&VecN::new2(0.5, 0.0)));
        assert!(!r.contains(&VecN::new2(-0.5, 0.0)));
        assert!(parse_region_expr("blob(1,2)").is_err());
    }
}
