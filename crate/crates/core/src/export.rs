//! CSV curve tables, JSON metadata sidecars and OBJ ellipsoid meshes.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::curve::{Curve, SampledCurve};
use crate::darboux::local_geometry;
use crate::error::{Error, Result};
use crate::metric::{EllipticMetric, Vec3};
use crate::verify::VerificationReport;

pub const CSV_HEADER: &str = "s,x,y,z";
pub const CSV_FRAME_HEADER: &str = "s,x,y,z,tx,ty,tz,yx,yy,yz,kg";

/// Renders `n` uniform samples as CSV. With `frames`, every row also holds
/// the unit tangent, the side vector and the geodesic curvature; rows where
/// the frame is undefined (cusps) carry `NaN` there.
pub fn curve_to_csv(c: &Curve, n: usize, frames: bool) -> Result<String> {
    if n < 2 {
        return Err(Error::domain("need at least two samples"));
    }
    let mut out = String::with_capacity(n * if frames { 260 } else { 100 });
    out.push_str(if frames { CSV_FRAME_HEADER } else { CSV_HEADER });
    out.push('\n');
    for s in c.sample_params(n) {
        let p = c.position(s);
        write!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", s, p.x, p.y, p.z).unwrap();
        if frames {
            let (t, y, k) = match local_geometry(c, s) {
                Ok(g) => (g.frame.t, g.frame.y, g.geodesic_curvature),
                Err(_) => (Vec3::repeat(f64::NAN), Vec3::repeat(f64::NAN), f64::NAN),
            };
            for v in [t.x, t.y, t.z, y.x, y.y, y.z, k] {
                write!(out, ",{v:.16e}").unwrap();
            }
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn write_curve_csv(path: &Path, c: &Curve, n: usize, frames: bool) -> Result<()> {
    let text = curve_to_csv(c, n, frames)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Parsed rows of a curve CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveTable {
    pub params: Vec<f64>,
    pub points: Vec<Vec3>,
}

impl CurveTable {
    /// A sampled curve through the rows; the params must be uniform.
    pub fn to_curve(&self, metric: EllipticMetric) -> Result<Curve> {
        let samples = SampledCurve::from_points(&self.params, self.points.clone())?;
        Ok(Curve::sampled(metric, samples))
    }
}

pub fn parse_curve_csv(text: &str, path: &Path) -> Result<CurveTable> {
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file".into()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.len() < 4 || cols[..4] != ["s", "x", "y", "z"] {
        return Err(parse_err(1, format!("expected header starting `{CSV_HEADER}`")));
    }
    let width = cols.len();
    let mut params = Vec::new();
    let mut points = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != width {
            return Err(parse_err(
                i + 1,
                format!("expected {width} fields, found {}", fields.len()),
            ));
        }
        let mut v = [0.0; 4];
        for (j, f) in fields[..4].iter().enumerate() {
            v[j] = f
                .trim()
                .parse()
                .map_err(|e| parse_err(i + 1, format!("field {}: {e}", j + 1)))?;
        }
        params.push(v[0]);
        points.push(Vec3::new(v[1], v[2], v[3]));
    }
    if params.is_empty() {
        return Err(parse_err(2, "no data rows".into()));
    }
    Ok(CurveTable { params, points })
}

pub fn read_curve_csv(path: &Path) -> Result<CurveTable> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_curve_csv(&text, path)
}

/// Everything needed to regenerate a curve file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveMetadata {
    pub name: String,
    pub family: String,
    pub metric: EllipticMetric,
    pub params: serde_json::Value,
    pub samples: usize,
    pub domain: (f64, f64),
    pub radius: Option<f64>,
    pub generator_version: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub verification: Option<VerificationSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationSummary {
    pub passed: bool,
    pub checks: usize,
    pub failed: Vec<String>,
}

impl From<&VerificationReport> for VerificationSummary {
    fn from(r: &VerificationReport) -> Self {
        Self {
            passed: r.passed(),
            checks: r.checks.len(),
            failed: r.failures().map(|c| c.name.clone()).collect(),
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

/// A triangulated latitude/longitude grid on the elliptical sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct EllipsoidMesh {
    pub vertices: Vec<Vec3>,
    /// Zero-based vertex indices.
    pub faces: Vec<[usize; 3]>,
    rows: usize,
    cols: usize,
}

impl EllipsoidMesh {
    /// `resolution` rows of latitude (poles included) by `2 · resolution`
    /// columns of longitude. The pole rows repeat one point, and their bands
    /// are fanned with one triangle per quad.
    pub fn new(m: &EllipticMetric, resolution: usize) -> Result<Self> {
        if resolution < 4 {
            return Err(Error::domain("mesh resolution must be at least 4"));
        }
        let rows = resolution;
        let cols = 2 * resolution;
        let mut vertices = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            let polar = std::f64::consts::PI * i as f64 / (rows - 1) as f64;
            for j in 0..cols {
                let az = 2.0 * std::f64::consts::PI * j as f64 / cols as f64;
                let v = if i == 0 {
                    m.from_round(&Vec3::z())
                } else if i == rows - 1 {
                    m.from_round(&-Vec3::z())
                } else {
                    m.sphere_point(polar, az)
                };
                vertices.push(v);
            }
        }
        let idx = |i: usize, j: usize| i * cols + j % cols;
        let mut faces = Vec::new();
        for i in 0..rows - 1 {
            for j in 0..cols {
                let (a, b, c, d) = (idx(i, j), idx(i, j + 1), idx(i + 1, j + 1), idx(i + 1, j));
                if i == 0 {
                    faces.push([a, d, c]);
                } else if i == rows - 2 {
                    faces.push([a, d, b]);
                } else {
                    faces.push([a, d, c]);
                    faces.push([a, c, b]);
                }
            }
        }
        Ok(Self {
            vertices,
            faces,
            rows,
            cols,
        })
    }

    pub fn grid(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// `V - E + F` after merging each pole row into a single vertex.
    pub fn welded_euler_characteristic(&self) -> i64 {
        let weld = |v: usize| {
            if v < self.cols {
                0
            } else if v >= (self.rows - 1) * self.cols {
                (self.rows - 1) * self.cols
            } else {
                v
            }
        };
        let mut verts = HashSet::new();
        let mut edges = HashSet::new();
        let mut faces = 0i64;
        for f in &self.faces {
            let w = f.map(weld);
            if w[0] == w[1] || w[1] == w[2] || w[0] == w[2] {
                continue;
            }
            faces += 1;
            for k in 0..3 {
                verts.insert(w[k]);
                let (a, b) = (w[k], w[(k + 1) % 3]);
                edges.insert((a.min(b), a.max(b)));
            }
        }
        verts.len() as i64 - edges.len() as i64 + faces
    }

    pub fn to_obj(&self) -> String {
        let mut out = String::with_capacity(self.vertices.len() * 60 + self.faces.len() * 24);
        for v in &self.vertices {
            writeln!(out, "v {:.16e} {:.16e} {:.16e}", v.x, v.y, v.z).unwrap();
        }
        for f in &self.faces {
            writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1).unwrap();
        }
        out
    }
}

pub fn write_obj(path: &Path, mesh: &EllipsoidMesh) -> Result<()> {
    fs::write(path, mesh.to_obj()).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::equator;

    #[test]
    fn csv_round_trip_is_exact() {
        let m = EllipticMetric::new(4.0, 9.0, 16.0).unwrap();
        let c = equator(m);
        let text = curve_to_csv(&c, 50, false).unwrap();
        assert!(text.starts_with("s,x,y,z\n"));
        assert!(!text.contains('\r'));
        let table = parse_curve_csv(&text, Path::new("mem.csv")).unwrap();
        for (s, p) in table.params.iter().zip(&table.points) {
            assert_eq!(*p, c.position(*s));
        }
    }

    #[test]
    fn frame_columns_are_present() {
        let m = EllipticMetric::new(4.0, 9.0, 16.0).unwrap();
        let text = curve_to_csv(&equator(m), 10, true).unwrap();
        let row = text.lines().nth(3).unwrap();
        assert_eq!(row.split(',').count(), 11);
        let table = parse_curve_csv(&text, Path::new("mem.csv")).unwrap();
        assert_eq!(table.points.len(), 10);
    }

    #[test]
    fn malformed_rows_report_their_line() {
        let err = parse_curve_csv("s,x,y,z\n0,1,2,3\n1,2,oops,4\n", Path::new("bad.csv")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        assert!(parse_curve_csv("a,b\n", Path::new("bad.csv")).is_err());
    }

    #[test]
    fn mesh_is_closed_and_on_the_ellipsoid() {
        let m = EllipticMetric::new(4.0, 9.0, 16.0).unwrap();
        let mesh = EllipsoidMesh::new(&m, 64).unwrap();
        assert_eq!(mesh.vertices.len(), 64 * 128);
        assert_eq!(mesh.grid(), (64, 128));
        assert_eq!(mesh.welded_euler_characteristic(), 2);
        for v in &mesh.vertices {
            assert!((m.inner(v, v) - 1.0).abs() < 1e-12);
        }
        let round = EllipsoidMesh::new(&EllipticMetric::round(), 8).unwrap();
        assert!(round.vertices.iter().all(|v| (v.norm() - 1.0).abs() < 1e-15));
        assert!(EllipsoidMesh::new(&m, 3).is_err());
    }
}
