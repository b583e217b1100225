//! Lorentz forces of Killing fields on the elliptical sphere, magnetic
//! trajectories, and the curvature equation `k'' + δ k k' = 0`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::curve::{Curve, SampledCurve};
use crate::darboux::{local_geometry, CurvatureProfile, DarbouxFrame};
use crate::error::{Error, Result};
use crate::metric::{EllipticMetric, Matrix3, Vec3};
use crate::numerics::ivp::{integrate_ivp, IvpProblem, SampledPath, DEFAULT_TOLERANCE};

/// How strictly an axis must be B-unit for an axis-generated field.
pub const FIELD_AXIS_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug)]
pub enum FieldKind {
    /// `V(p) = strength · (u ×_E p)`, the generator of rotations about `u`.
    Axis { axis: Vec3, strength: f64 },
    /// `V = δ t - k(s) γ - y`, written in the Darboux frame of the particle.
    Frame { delta: f64, profile: CurvatureProfile },
}

#[derive(Clone, Debug)]
pub struct KillingField {
    kind: FieldKind,
    metric: EllipticMetric,
}

impl KillingField {
    pub fn axis(axis: Vec3, strength: f64, metric: EllipticMetric) -> Result<Self> {
        let b = metric.inner(&axis, &axis);
        if !((b - 1.0).abs() <= FIELD_AXIS_TOLERANCE) {
            return Err(Error::NonUnitAxis(b));
        }
        if !strength.is_finite() {
            return Err(Error::domain("field strength must be finite"));
        }
        Ok(Self {
            kind: FieldKind::Axis { axis, strength },
            metric,
        })
    }

    pub fn frame(delta: f64, profile: CurvatureProfile, metric: EllipticMetric) -> Self {
        Self {
            kind: FieldKind::Frame { delta, profile },
            metric,
        }
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    pub fn metric(&self) -> &EllipticMetric {
        &self.metric
    }

    /// Field value at position `p` for a particle with unit velocity `t` at
    /// arclength `s`.
    pub fn at(&self, p: &Vec3, t: &Vec3, s: f64) -> Vec3 {
        let m = &self.metric;
        match &self.kind {
            FieldKind::Axis { axis, strength } => m.cross(axis, p) * *strength,
            FieldKind::Frame { delta, profile } => {
                t * *delta - p * profile.eval(s) - m.cross(t, p)
            }
        }
    }
}

/// `φ(X) = V ×_E X`.
pub fn lorentz_force(v: &Vec3, x: &Vec3, m: &EllipticMetric) -> Vec3 {
    m.cross(v, x)
}

/// Matrix of `φ` in the frame `(t, γ, y)`: column `j` holds the components
/// of `φ(e_j)`.
pub fn lorentz_matrix(v: &Vec3, frame: &DarbouxFrame, m: &EllipticMetric) -> Matrix3 {
    let cols = frame.vectors().map(|e| frame.components(&lorentz_force(v, &e, m), m));
    Matrix3::from_columns(&cols)
}

/// The frame matrix predicted for `V = δ t - k γ - y`:
/// `φ(t) = -γ + k y`, `φ(γ) = t + δ y`, `φ(y) = -k t - δ γ`.
pub fn expected_lorentz_matrix(kg: f64, delta: f64) -> Matrix3 {
    Matrix3::new(
        0.0, 1.0, -kg, //
        -1.0, 0.0, -delta, //
        kg, delta, 0.0,
    )
}

/// `V(s) = δ t(s) - k_g(s) γ(s) - y(s)` at one sample of a curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub s: f64,
    pub frame: DarbouxFrame,
    pub geodesic_curvature: f64,
    pub field: Vec3,
}

pub fn field_along_curve(c: &Curve, delta: f64, params: &[f64]) -> Result<Vec<FieldSample>> {
    params
        .iter()
        .map(|&s| {
            let g = local_geometry(c, s)?;
            let f = g.frame;
            let k = g.geodesic_curvature;
            Ok(FieldSample {
                s,
                frame: f,
                geodesic_curvature: k,
                field: f.t * delta - f.gamma * k - f.y,
            })
        })
        .collect()
}

/// Settings for [`integrate_magnetic_trajectory_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryIntegration {
    pub tolerance: f64,
    pub spacing: f64,
    pub renormalize_every: usize,
}

impl Default for TrajectoryIntegration {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            spacing: 0.005,
            renormalize_every: 50,
        }
    }
}

pub fn integrate_magnetic_trajectory(v: &KillingField, p0: Vec3, t0: Vec3, length: f64) -> Result<Curve> {
    integrate_magnetic_trajectory_with(v, p0, t0, length, &TrajectoryIntegration::default())
}

/// Integrates `γ'' = Π(V(γ) ×_E γ') - B(γ', γ') γ` with `Π` the projection
/// onto the tangent plane, from unit position `p0` and unit velocity `t0`.
pub fn integrate_magnetic_trajectory_with(
    v: &KillingField,
    p0: Vec3,
    t0: Vec3,
    length: f64,
    opts: &TrajectoryIntegration,
) -> Result<Curve> {
    let m = *v.metric();
    let tol = 1e-10;
    if (m.inner(&p0, &p0) - 1.0).abs() > tol
        || (m.inner(&t0, &t0) - 1.0).abs() > tol
        || m.inner(&p0, &t0).abs() > tol
    {
        return Err(Error::domain(
            "initial position and velocity must be B-unit and B-orthogonal",
        ));
    }
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::domain("trajectory length must be positive"));
    }
    let n = ((length / opts.spacing).ceil() as usize + 1).max(5);
    let h = length / (n - 1) as f64;
    let grid: Vec<f64> = (0..n).map(|i| if i == n - 1 { length } else { i as f64 * h }).collect();

    let accel = move |s: f64, p: &Vec3, u: &Vec3| -> Vec3 {
        let speed = m.norm(u);
        let t = u / speed;
        let w = lorentz_force(&v.at(p, &t, s), u, &m);
        let tangential = w - p * m.inner(&w, p);
        tangential - p * m.inner(u, u)
    };
    let rhs = |s: f64, y: &[f64], dy: &mut [f64]| {
        let p = Vec3::new(y[0], y[1], y[2]);
        let u = Vec3::new(y[3], y[4], y[5]);
        let a = accel(s, &p, &u);
        dy[..3].copy_from_slice(u.as_slice());
        dy[3..].copy_from_slice(a.as_slice());
    };
    let project = |y: &mut [f64]| {
        let p = Vec3::new(y[0], y[1], y[2]);
        let p = p / m.norm(&p);
        let u = Vec3::new(y[3], y[4], y[5]);
        let u = u - p * m.inner(&u, &p);
        let u = u / m.norm(&u);
        y[..3].copy_from_slice(p.as_slice());
        y[3..].copy_from_slice(u.as_slice());
    };
    let mut y0 = p0.as_slice().to_vec();
    y0.extend_from_slice(t0.as_slice());
    let problem = IvpProblem::new(rhs, 0.0, length, y0)
        .tolerance(opts.tolerance)
        .max_step(h)
        .outputs(grid)
        .project_every(opts.renormalize_every, project);
    let path = integrate_ivp(&problem)?;

    let mut points = Vec::with_capacity(n);
    let mut velocities = Vec::with_capacity(n);
    let mut accelerations = Vec::with_capacity(n);
    for (&s, y) in path.params().iter().zip(path.states()) {
        let p = Vec3::new(y[0], y[1], y[2]);
        let u = Vec3::new(y[3], y[4], y[5]);
        points.push(p);
        velocities.push(u);
        accelerations.push(accel(s, &p, &u));
    }
    let samples = SampledCurve::new(0.0, h, points, velocities, accelerations)?;
    Ok(Curve::sampled(m, samples)
        .with_unit_speed(true)
        .with_label("magnetic trajectory"))
}

/// Uniform samples of `f` on `[a, b]`.
pub fn sample_scalar(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> Result<SampledPath> {
    let s = crate::curve::linspace(a, b, n);
    let v = s.iter().map(|&x| f(x)).collect();
    SampledPath::scalar(s, v)
}

fn uniform_scalar(samples: &SampledPath) -> Result<(f64, Vec<f64>)> {
    if samples.len() < 5 {
        return Err(Error::domain("need at least five samples"));
    }
    if samples.states().iter().any(|v| v.len() != 1) {
        return Err(Error::domain("expected scalar samples"));
    }
    let h = samples
        .uniform_step()
        .ok_or_else(|| Error::domain("samples must be uniformly spaced"))?;
    Ok((h, samples.component(0)))
}

/// First and second derivatives by five-point central stencils at the
/// interior nodes `2..n-2`.
fn central_derivatives(v: &[f64], h: f64) -> Vec<(usize, f64, f64)> {
    (2..v.len() - 2)
        .map(|i| {
            let d1 = (8.0 * (v[i + 1] - v[i - 1]) - (v[i + 2] - v[i - 2])) / (12.0 * h);
            let d2 = (16.0 * (v[i + 1] + v[i - 1]) - (v[i + 2] + v[i - 2]) - 30.0 * v[i]) / (12.0 * h * h);
            (i, d1, d2)
        })
        .collect()
}

/// Largest `|k'' + δ k k'|` over interior samples of a uniformly sampled
/// geodesic curvature.
pub fn curvature_ode_residual(kg: &SampledPath, delta: f64) -> Result<f64> {
    let (h, k) = uniform_scalar(kg)?;
    Ok(central_derivatives(&k, h)
        .into_iter()
        .map(|(i, d1, d2)| (d2 + delta * k[i] * d1).abs())
        .fold(0.0, crate::curve::nan_max))
}

/// The two solution families of `k'' + δ k k' = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "branch", rename_all = "lowercase")]
pub enum CurvatureBranch {
    Constant { c: f64 },
    /// `√(2c₁/δ) tanh(√(δc₁/2) (s + c₂))`.
    Tanh { delta: f64, c1: f64, c2: f64 },
}

pub fn curvature_solution(branch: CurvatureBranch) -> Result<CurvatureProfile> {
    match branch {
        CurvatureBranch::Constant { c } => {
            if !c.is_finite() {
                return Err(Error::domain("constant curvature must be finite"));
            }
            Ok(CurvatureProfile::constant(c))
        }
        CurvatureBranch::Tanh { delta, c1, c2 } => {
            if !(delta > 0.0 && c1 > 0.0 && c2.is_finite()) {
                return Err(Error::domain("tanh branch needs δ > 0 and c1 > 0"));
            }
            let amp = (2.0 * c1 / delta).sqrt();
            let rate = (delta * c1 / 2.0).sqrt();
            Ok(CurvatureProfile::custom(
                format!("{amp} tanh({rate} (s + {c2}))"),
                move |s| amp * (rate * (s + c2)).tanh(),
            ))
        }
    }
}

/// A field `V = ω t + cos θ γ + sin θ y` with `k_g = cot θ`.
#[derive(Clone)]
pub struct HelixField {
    pub omega: f64,
    theta: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for HelixField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HelixField {{ omega: {} }}", self.omega)
    }
}

impl HelixField {
    pub fn new(omega: f64, theta: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            omega,
            theta: Arc::new(theta),
        }
    }

    pub fn theta(&self, s: f64) -> f64 {
        (self.theta)(s)
    }

    pub fn geodesic_curvature(&self, s: f64) -> f64 {
        1.0 / self.theta(s).tan()
    }

    pub fn vector(&self, frame: &DarbouxFrame) -> Vec3 {
        let th = self.theta(frame.s);
        frame.combine(&Vec3::new(self.omega, th.cos(), th.sin()))
    }
}

/// Largest `|θ'' sin²θ - ω θ' cos θ|` over interior samples.
pub fn helix_theta_residual(theta: &SampledPath, omega: f64) -> Result<f64> {
    let (h, th) = uniform_scalar(theta)?;
    if let Some((i, _)) = th.iter().enumerate().find(|(_, t)| t.sin().abs() < 1e-6) {
        return Err(Error::Singularity(theta.params()[i]));
    }
    Ok(central_derivatives(&th, h)
        .into_iter()
        .map(|(i, d1, d2)| (d2 * th[i].sin().powi(2) - omega * d1 * th[i].cos()).abs())
        .fold(0.0, crate::curve::nan_max))
}
