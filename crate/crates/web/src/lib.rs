//! Browser bindings: family curves, magnetic trajectories and an ellipsoid
//! wireframe, returned as flat `Float64Array`s for a canvas renderer.

use ellipsoid_traj::curve::nan_max;
use ellipsoid_traj::darboux::curvature_samples;
use ellipsoid_traj::export::EllipsoidMesh;
use ellipsoid_traj::families::{
    circle_constant_kg, cycloid, helix, satellite, CircleParams, CycloidParams, HelixParams, OmegaMode,
    SatelliteParams,
};
use ellipsoid_traj::magnetic::{curvature_ode_residual, curvature_solution, integrate_magnetic_trajectory, CurvatureBranch};
use ellipsoid_traj::numerics::SampledPath;
use ellipsoid_traj::{Curve, CurveForm, DarbouxFrame, EllipticMetric, KillingField};
use wasm_bindgen::prelude::*;

/// Sampled positions with curvature and a one-line check summary.
#[wasm_bindgen]
#[derive(Clone, Debug)]
pub struct CurveData {
    params: Vec<f64>,
    positions: Vec<f64>,
    curvature: Vec<f64>,
    summary: String,
}

#[wasm_bindgen]
impl CurveData {
    pub fn params(&self) -> Vec<f64> {
        self.params.clone()
    }

    /// `x, y, z` triples.
    pub fn positions(&self) -> Vec<f64> {
        self.positions.clone()
    }

    /// Geodesic curvature per sample; `NaN` where undefined.
    pub fn curvature(&self) -> Vec<f64> {
        self.curvature.clone()
    }

    pub fn summary(&self) -> String {
        self.summary.clone()
    }
}

impl CurveData {
    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn position_triples(&self) -> impl Iterator<Item = [f64; 3]> + '_ {
        self.positions.chunks_exact(3).map(|c| [c[0], c[1], c[2]])
    }
}

fn metric(a1: f64, a2: f64, a3: f64) -> Result<EllipticMetric, String> {
    EllipticMetric::new(a1, a2, a3).map_err(|e| e.to_string())
}

fn sample(c: &Curve, params: Vec<f64>, summary: String) -> CurveData {
    let mut positions = Vec::with_capacity(3 * params.len());
    let mut curvature = Vec::with_capacity(params.len());
    for &s in &params {
        let p = c.position(s);
        positions.extend([p.x, p.y, p.z]);
        curvature.push(ellipsoid_traj::darboux::geodesic_curvature(c, s).unwrap_or(f64::NAN));
    }
    CurveData {
        params,
        positions,
        curvature,
        summary,
    }
}

/// Builds `family` (`helix`, `satellite`, `cycloid`, `circle`) from two
/// parameters: `k` for helices, `(alpha, k)` for satellites, `(a, b)` for
/// spherical cycloids and the example number for circles. Cycloids are
/// rescaled onto the unit sphere.
pub fn build_family_curve(
    family: &str,
    first: f64,
    second: f64,
    m: EllipticMetric,
    samples: usize,
) -> Result<CurveData, String> {
    let samples = samples.clamp(16, 20_000);
    let c = match family {
        "helix" => helix(&HelixParams::new(first, m)),
        "satellite" => satellite(&SatelliteParams::new(first, second, m)),
        "cycloid" => CycloidParams::with_mode(first, second, OmegaMode::Spherical, m)
            .and_then(|p| cycloid(&p))
            .and_then(|c| c.to_unit_sphere()),
        "circle" => circle_constant_kg(&if first == 2.0 {
            CircleParams::example_4_2(m)
        } else {
            CircleParams::example_4_1(m)
        }),
        other => return Err(format!("unknown family `{other}`")),
    }
    .map_err(|e| e.to_string())?;
    let deviation = c.sphere_deviation(samples).map_err(|e| e.to_string())?;
    let params = c.sample_params(samples);
    Ok(sample(
        &c,
        params,
        format!("{}: max |B(p,p) - 1| = {deviation:.2e}", c.label()),
    ))
}

/// A trajectory of the frame field whose curvature follows the tanh branch
/// with quasislope `delta`, started on the equator.
pub fn build_magnetic_trajectory(
    m: EllipticMetric,
    delta: f64,
    c1: f64,
    shift: f64,
    length: f64,
) -> Result<CurveData, String> {
    if !(length > 0.0 && length <= 200.0) {
        return Err("length must be in (0, 200]".into());
    }
    let profile = curvature_solution(CurvatureBranch::Tanh { delta, c1, c2: shift }).map_err(|e| e.to_string())?;
    let field = KillingField::frame(delta, profile, m);
    let start = DarbouxFrame::equatorial(&m);
    let c = integrate_magnetic_trajectory(&field, start.gamma, start.t, length).map_err(|e| e.to_string())?;
    let CurveForm::Sampled(s) = c.form() else {
        return Err("trajectory is not sampled".into());
    };
    let params = s.params();
    let drift = s
        .points()
        .iter()
        .zip(s.velocities())
        .map(|(p, v)| nan_max((m.inner(p, p) - 1.0).abs(), (m.inner(v, v) - 1.0).abs()))
        .fold(0.0, nan_max);
    let kg = curvature_samples(&c, &params).map_err(|e| e.to_string())?;
    let residual = SampledPath::scalar(params.clone(), kg)
        .and_then(|k| curvature_ode_residual(&k, delta))
        .map_err(|e| e.to_string())?;
    Ok(sample(
        &c,
        params,
        format!("drift {drift:.2e}, k'' + d k k' residual {residual:.2e}"),
    ))
}

/// Latitude and longitude lines as consecutive `x, y, z` segment endpoints.
pub fn build_wireframe(m: EllipticMetric, rows: usize) -> Result<Vec<f64>, String> {
    let mesh = EllipsoidMesh::new(&m, rows.clamp(4, 256)).map_err(|e| e.to_string())?;
    let (rows, cols) = mesh.grid();
    let v = &mesh.vertices;
    let mut out = Vec::new();
    let mut push = |a: usize, b: usize| {
        for p in [v[a], v[b]] {
            out.extend([p.x, p.y, p.z]);
        }
    };
    for i in 1..rows - 1 {
        for j in 0..cols {
            push(i * cols + j, i * cols + (j + 1) % cols);
        }
    }
    for j in (0..cols).step_by(2) {
        for i in 0..rows - 1 {
            push(i * cols + j, (i + 1) * cols + j);
        }
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn family_curve(
    family: &str,
    first: f64,
    second: f64,
    a1: f64,
    a2: f64,
    a3: f64,
    samples: usize,
) -> Result<CurveData, JsError> {
    metric(a1, a2, a3)
        .and_then(|m| build_family_curve(family, first, second, m, samples))
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn magnetic_trajectory(
    a1: f64,
    a2: f64,
    a3: f64,
    delta: f64,
    c1: f64,
    shift: f64,
    length: f64,
) -> Result<CurveData, JsError> {
    metric(a1, a2, a3)
        .and_then(|m| build_magnetic_trajectory(m, delta, c1, shift, length))
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn ellipsoid_wireframe(a1: f64, a2: f64, a3: f64, rows: usize) -> Result<Vec<f64>, JsError> {
    metric(a1, a2, a3)
        .and_then(|m| build_wireframe(m, rows))
        .map_err(|e| JsError::new(&e))
}
