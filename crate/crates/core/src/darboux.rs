//! Darboux frames `{t, γ, y}` along curves on the unit elliptical sphere,
//! geodesic curvature, and curves synthesised from a curvature profile.
//!
//! The side vector is `y = t ×_E γ`. With this orientation the frame obeys
//! `t' = -γ + k_g y`, `γ' = t`, `y' = -k_g t` in arclength and
//! `y ×_E t = γ`, `γ ×_E y = t`, `γ ×_E t = -y`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::curve::{Curve, SampledCurve};
use crate::error::{Error, Result};
use crate::metric::{EllipticMetric, RotationSpec, Vec3};
use crate::numerics::arclength::MIN_SPEED;
use crate::numerics::ivp::{integrate_ivp, IvpProblem, DEFAULT_TOLERANCE};

/// Normal curvature of the unit sphere in the frame's orientation.
pub const NORMAL_CURVATURE: f64 = -1.0;
/// Geodesic torsion, identically zero on the sphere.
pub const GEODESIC_TORSION: f64 = 0.0;

/// Step of the central differences taken of frame fields.
pub const FRAME_FD_STEP: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DarbouxFrame {
    pub s: f64,
    pub t: Vec3,
    pub gamma: Vec3,
    pub y: Vec3,
}

impl DarbouxFrame {
    /// Completes position and unit tangent with `y = t ×_E γ`.
    pub fn new(s: f64, gamma: Vec3, t: Vec3, m: &EllipticMetric) -> Self {
        Self {
            s,
            t,
            gamma,
            y: m.cross(&t, &gamma),
        }
    }

    /// The frame at `(1/√a1, 0, 0)` heading along `+y`.
    pub fn equatorial(m: &EllipticMetric) -> Self {
        Self::new(0.0, m.unit_axis(0), m.unit_axis(1), m)
    }

    pub fn vectors(&self) -> [Vec3; 3] {
        [self.t, self.gamma, self.y]
    }

    /// Largest `|B(e_i, e_j) - δ_ij|` over the frame.
    pub fn orthonormality_defect(&self, m: &EllipticMetric) -> f64 {
        let v = self.vectors();
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in i..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((m.inner(&v[i], &v[j]) - target).abs());
            }
        }
        worst
    }

    /// Largest B-norm violation of `y×t = γ`, `γ×y = t`, `γ×t = -y`.
    pub fn handedness_defect(&self, m: &EllipticMetric) -> f64 {
        let a = m.norm(&(m.cross(&self.y, &self.t) - self.gamma));
        let b = m.norm(&(m.cross(&self.gamma, &self.y) - self.t));
        let c = m.norm(&(m.cross(&self.gamma, &self.t) + self.y));
        a.max(b).max(c)
    }

    /// Components `(B(v,t), B(v,γ), B(v,y))`.
    pub fn components(&self, v: &Vec3, m: &EllipticMetric) -> Vec3 {
        Vec3::new(m.inner(v, &self.t), m.inner(v, &self.gamma), m.inner(v, &self.y))
    }

    /// `c_t t + c_γ γ + c_y y`.
    pub fn combine(&self, c: &Vec3) -> Vec3 {
        self.t * c.x + self.gamma * c.y + self.y * c.z
    }

    pub fn to_round(&self, m: &EllipticMetric) -> [Vec3; 3] {
        [m.to_round(&self.t), m.to_round(&self.gamma), m.to_round(&self.y)]
    }

    /// B-Gram–Schmidt in the order γ, t, then `y := t ×_E γ`.
    pub fn reorthonormalized(&self, m: &EllipticMetric) -> Self {
        let g = self.gamma / m.norm(&self.gamma);
        let t = self.t - g * m.inner(&self.t, &g);
        let t = t / m.norm(&t);
        Self::new(self.s, g, t, m)
    }

    pub fn transformed(&self, r: &crate::metric::Matrix3) -> Self {
        Self {
            s: self.s,
            t: r * self.t,
            gamma: r * self.gamma,
            y: r * self.y,
        }
    }
}

/// A geodesic-curvature function of arclength.
#[derive(Clone)]
pub struct CurvatureProfile {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    description: String,
    /// Poles sit where `rate · s + phase` is a multiple of π.
    poles: Option<(f64, f64)>,
}

impl fmt::Debug for CurvatureProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CurvatureProfile({})", self.description)
    }
}

impl CurvatureProfile {
    pub fn custom(description: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            f: Arc::new(f),
            description: description.into(),
            poles: None,
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::custom(format!("constant {c}"), move |_| c)
    }

    pub fn linear(slope: f64, intercept: f64) -> Self {
        Self::custom(format!("{slope} s + {intercept}"), move |s| slope * s + intercept)
    }

    /// `amplitude · cot(rate · s + phase)`.
    pub fn cot(amplitude: f64, rate: f64, phase: f64) -> Self {
        let mut p = Self::custom(
            format!("{amplitude} cot({rate} s + {phase})"),
            move |s| amplitude / (rate * s + phase).tan(),
        );
        p.poles = Some((rate, phase));
        p
    }

    pub fn eval(&self, s: f64) -> f64 {
        (self.f)(s)
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// First pole in the closed interval `[a, b]`, if any.
    pub fn pole_in(&self, a: f64, b: f64) -> Option<f64> {
        let (rate, phase) = self.poles?;
        if rate == 0.0 {
            return ((phase / std::f64::consts::PI).fract() == 0.0).then_some(a);
        }
        let (lo, hi) = {
            let x = (rate * a + phase) / std::f64::consts::PI;
            let y = (rate * b + phase) / std::f64::consts::PI;
            (x.min(y), x.max(y))
        };
        let n = lo.ceil();
        (n <= hi).then(|| {
            let s = (n * std::f64::consts::PI - phase) / rate;
            s.clamp(a.min(b), a.max(b))
        })
    }
}

/// Frame, speed and curvature at one parameter value.
#[derive(Clone, Copy, Debug)]
pub struct LocalGeometry {
    pub frame: DarbouxFrame,
    /// B-speed `|γ'|` in the curve's own parameter.
    pub speed: f64,
    /// `dt/ds` in arclength.
    pub tangent_rate: Vec3,
    pub geodesic_curvature: f64,
}

/// Frame and curvature of `c` at parameter `s`, by the chain rule so that
/// any regular parameterization gives the arclength quantities. Curves on a
/// sphere of radius `r ≠ 1` are measured after scaling to the unit sphere.
pub fn local_geometry(c: &Curve, s: f64) -> Result<LocalGeometry> {
    let m = c.metric();
    let scale = match c.radius() {
        Some(r) if r > 0.0 => 1.0 / r,
        Some(_) => return Err(Error::domain("curve radius must be positive")),
        None => return Err(Error::domain("frames need a spherical curve")),
    };
    let jet = c.jet(s);
    let (p, d1, d2) = (jet.p * scale, jet.d1 * scale, jet.d2 * scale);
    let v = m.norm(&d1);
    if !(v >= MIN_SPEED) {
        return Err(Error::Regularity { s, speed: v });
    }
    let t = d1 / v;
    let dt = d2 / v - d1 * (m.inner(&d1, &d2) / (v * v * v));
    let ts = dt / v;
    let frame = DarbouxFrame::new(s, p, t, m);
    let kg = m.inner(&ts, &frame.y);
    Ok(LocalGeometry {
        frame,
        speed: v,
        tangent_rate: ts,
        geodesic_curvature: kg,
    })
}

pub fn frame_at(c: &Curve, s: f64) -> Result<DarbouxFrame> {
    local_geometry(c, s).map(|g| g.frame)
}

/// `k_g = B(t_s, y)`.
pub fn geodesic_curvature(c: &Curve, s: f64) -> Result<f64> {
    local_geometry(c, s).map(|g| g.geodesic_curvature)
}

pub fn curvature_samples(c: &Curve, params: &[f64]) -> Result<Vec<f64>> {
    params.iter().map(|&s| geodesic_curvature(c, s)).collect()
}

/// Geodesic curvature of the round-sphere image `q = A γ / r`, computed in
/// Euclidean terms as `(q' × q) · q'' / |q'|³`.
pub fn round_geodesic_curvature(c: &Curve, s: f64) -> Result<f64> {
    let m = c.metric();
    let r = c
        .radius()
        .ok_or_else(|| Error::domain("frames need a spherical curve"))?;
    let jet = c.jet(s);
    let q = m.to_round(&jet.p) / r;
    let q1 = m.to_round(&jet.d1) / r;
    let q2 = m.to_round(&jet.d2) / r;
    let v = q1.norm();
    if !(v >= MIN_SPEED) {
        return Err(Error::Regularity { s, speed: v });
    }
    Ok(q1.cross(&q).dot(&q2) / (v * v * v))
}

/// Maximum B-norm residuals of the three frame equations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FrameResidual {
    /// `|t' + γ - k_g y|`
    pub tangent: f64,
    /// `|γ' - t|`
    pub position: f64,
    /// `|y' + k_g t|`
    pub side: f64,
}

impl FrameResidual {
    pub fn max(&self) -> f64 {
        self.tangent.max(self.position).max(self.side)
    }
}

/// Evaluates the frame equations at `samples` interior parameters, taking
/// central differences of the frame fields and converting to arclength.
pub fn frame_ode_residual(c: &Curve, samples: usize) -> Result<FrameResidual> {
    frame_ode_residual_at(c, &c.interior_params(samples, 0.01))
}

pub fn frame_ode_residual_at(c: &Curve, params: &[f64]) -> Result<FrameResidual> {
    let m = c.metric();
    let h = FRAME_FD_STEP;
    let mut out = FrameResidual::default();
    for &s in params {
        let g = local_geometry(c, s)?;
        let f = g.frame;
        let k = g.geodesic_curvature;
        let field = |pick: fn(&DarbouxFrame) -> Vec3| -> Result<Vec3> {
            let fwd = frame_at(c, s + h)?;
            let bwd = frame_at(c, s - h)?;
            Ok((pick(&fwd) - pick(&bwd)) / (2.0 * h * g.speed))
        };
        let dt = field(|f| f.t)?;
        let dg = field(|f| f.gamma)?;
        let dy = field(|f| f.y)?;
        out.tangent = out.tangent.max(m.norm(&(dt + f.gamma - f.y * k)));
        out.position = out.position.max(m.norm(&(dg - f.t)));
        out.side = out.side.max(m.norm(&(dy + f.t * k)));
    }
    Ok(out)
}

/// `max |γ''' + (1 + c²) γ'|` over interior samples of a unit-speed curve;
/// the third-order equation for constant geodesic curvature `c`.
pub fn constant_curvature_residual(c: &Curve, kg: f64, samples: usize) -> Result<f64> {
    require_unit_speed(c)?;
    let m = c.metric();
    Ok(c.interior_params(samples, 0.01)
        .into_iter()
        .map(|s| {
            let j = c.jet(s);
            m.norm(&(j.d3 + j.d1 * (1.0 + kg * kg)))
        })
        .fold(0.0, crate::curve::nan_max))
}

/// `max |k γ''' - k' γ'' + (k³ + k) γ' - k' γ|` with `k` and `k'` measured
/// along the unit-speed curve.
pub fn third_order_residual(c: &Curve, samples: usize) -> Result<f64> {
    require_unit_speed(c)?;
    let m = c.metric();
    let h = 1e-3;
    let mut worst: f64 = 0.0;
    for s in c.interior_params(samples, 0.01) {
        let j = c.jet(s);
        let k = geodesic_curvature(c, s)?;
        let dk = (geodesic_curvature(c, s + h)? - geodesic_curvature(c, s - h)?) / (2.0 * h);
        let r = j.d3 * k - j.d2 * dk + j.d1 * (k * k * k + k) - j.p * dk;
        worst = crate::curve::nan_max(worst, m.norm(&r));
    }
    Ok(worst)
}

fn require_unit_speed(c: &Curve) -> Result<()> {
    if c.is_unit_speed() {
        Ok(())
    } else {
        Err(Error::domain(
            "curve must be parameterized by arclength; resample it first",
        ))
    }
}

/// Settings for [`frame_integrate_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameIntegration {
    pub tolerance: f64,
    /// Output sample spacing in arclength; also the largest step taken.
    pub spacing: f64,
    /// Accepted steps between B-Gram–Schmidt passes.
    pub renormalize_every: usize,
}

impl Default for FrameIntegration {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            spacing: 0.005,
            renormalize_every: 50,
        }
    }
}

pub fn frame_integrate(
    profile: &CurvatureProfile,
    initial: &DarbouxFrame,
    length: f64,
    m: &EllipticMetric,
) -> Result<Curve> {
    frame_integrate_with(profile, initial, length, m, &FrameIntegration::default())
}

/// Integrates `t' = -γ + k(s) y`, `γ' = t`, `y' = -k(s) t` from `initial`
/// over arclength `length`, returning the unit-speed trace of `γ`.
pub fn frame_integrate_with(
    profile: &CurvatureProfile,
    initial: &DarbouxFrame,
    length: f64,
    m: &EllipticMetric,
    opts: &FrameIntegration,
) -> Result<Curve> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::domain("integration length must be positive"));
    }
    if initial.orthonormality_defect(m) > 1e-8 || initial.handedness_defect(m) > 1e-8 {
        return Err(Error::domain("initial frame is not a B-orthonormal Darboux frame"));
    }
    let s0 = initial.s;
    let s1 = s0 + length;
    if let Some(s) = profile.pole_in(s0, s1) {
        return Err(Error::Singularity(s));
    }
    let n = ((length / opts.spacing).ceil() as usize + 1).max(5);
    let h = length / (n - 1) as f64;
    let grid: Vec<f64> = (0..n).map(|i| if i == n - 1 { s1 } else { s0 + i as f64 * h }).collect();

    let mut y0 = Vec::with_capacity(9);
    for v in initial.vectors() {
        y0.extend_from_slice(v.as_slice());
    }
    let rhs = |s: f64, y: &[f64], dy: &mut [f64]| {
        let k = profile.eval(s);
        for i in 0..3 {
            let (t, g, side) = (y[i], y[3 + i], y[6 + i]);
            dy[i] = -g + k * side;
            dy[3 + i] = t;
            dy[6 + i] = -k * t;
        }
    };
    let project = |y: &mut [f64]| {
        let f = unpack_frame(0.0, y, m).reorthonormalized(m);
        pack_frame(&f, y);
    };
    let problem = IvpProblem::new(rhs, s0, s1, y0)
        .tolerance(opts.tolerance)
        .max_step(h)
        .outputs(grid)
        .project_every(opts.renormalize_every, project);
    let path = integrate_ivp(&problem)?;

    let mut points = Vec::with_capacity(n);
    let mut velocities = Vec::with_capacity(n);
    let mut accelerations = Vec::with_capacity(n);
    for (&s, state) in path.params().iter().zip(path.states()) {
        let f = unpack_frame(s, state, m);
        let k = profile.eval(s);
        points.push(f.gamma);
        velocities.push(f.t);
        accelerations.push(f.y * k - f.gamma);
    }
    let samples = SampledCurve::new(s0, h, points, velocities, accelerations)?;
    Ok(Curve::sampled(*m, samples)
        .with_unit_speed(true)
        .with_label(format!("k_g = {}", profile.description())))
}

fn unpack_frame(s: f64, y: &[f64], _m: &EllipticMetric) -> DarbouxFrame {
    DarbouxFrame {
        s,
        t: Vec3::new(y[0], y[1], y[2]),
        gamma: Vec3::new(y[3], y[4], y[5]),
        y: Vec3::new(y[6], y[7], y[8]),
    }
}

fn pack_frame(f: &DarbouxFrame, y: &mut [f64]) {
    for (i, v) in f.vectors().iter().enumerate() {
        y[3 * i..3 * i + 3].copy_from_slice(v.as_slice());
    }
}

/// Moves a curve along the Killing flow of an elliptical rotation.
pub fn flow_by_rotation(c: &Curve, spec: &RotationSpec) -> Curve {
    c.transformed(&spec.matrix())
}

/// Result of fitting `k_g ≈ amplitude · cot(rate · s + phase)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CotFit {
    pub amplitude: f64,
    pub rate: f64,
    pub phase: f64,
    /// Largest `|fit - data|` over the samples.
    pub max_residual: f64,
}

/// Least-squares cot fit for samples lying between two consecutive poles.
///
/// For a trial amplitude `c` the data map to angles `θ = acot(k/c) ∈ (0, π)`,
/// which a line in `s` must reproduce. The amplitude is found by golden
/// section on the unexplained fraction of the line fit over `|c| ∈ [1e-2, 1e2]` (log scale), for
/// both signs; the rate is reported positive.
pub fn fit_cot_profile(params: &[f64], values: &[f64]) -> Result<CotFit> {
    if params.len() != values.len() || params.len() < 3 {
        return Err(Error::domain("cot fit needs at least three (s, k) pairs"));
    }
    if values.iter().chain(params).any(|v| !v.is_finite()) {
        return Err(Error::domain("cot fit data must be finite"));
    }
    let line_fit = |c: f64| -> (f64, f64, f64) {
        let theta: Vec<f64> = values.iter().map(|k| 1f64.atan2(k / c)).collect();
        let (slope, icept) = linear_regression(params, &theta);
        let sse = params
            .iter()
            .zip(&theta)
            .map(|(s, th)| (slope * s + icept - th).powi(2))
            .sum::<f64>();
        let mean = theta.iter().sum::<f64>() / theta.len() as f64;
        let spread = theta.iter().map(|th| (th - mean).powi(2)).sum::<f64>();
        (sse / spread.max(f64::MIN_POSITIVE), slope, icept)
    };
    let mut best: Option<(f64, f64)> = None;
    for sign in [1.0, -1.0] {
        let obj = |x: f64| line_fit(sign * 10f64.powf(x)).0;
        let x = golden_section(obj, -2.0, 2.0, 200);
        let c = sign * 10f64.powf(x);
        let sse = obj(x);
        if best.is_none_or(|(_, b)| sse < b) {
            best = Some((c, sse));
        }
    }
    let (mut amplitude, _) = best.unwrap();
    let (_, mut rate, mut phase) = line_fit(amplitude);
    if rate < 0.0 {
        amplitude = -amplitude;
        rate = -rate;
        phase = -phase;
    }
    phase = phase.rem_euclid(std::f64::consts::PI);
    let max_residual = params
        .iter()
        .zip(values)
        .map(|(s, k)| (amplitude / (rate * s + phase).tan() - k).abs())
        .fold(0.0, f64::max);
    Ok(CotFit {
        amplitude,
        rate,
        phase,
        max_residual,
    })
}

fn linear_regression(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
        if (b - a).abs() < 1e-13 {
            break;
        }
    }
    0.5 * (a + b)
}
