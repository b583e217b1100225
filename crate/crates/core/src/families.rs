//! Closed-form curve families on the elliptical sphere, each also built by
//! composing elliptical rotations so the two constructions can be compared.
//!
//! Rotations here are [`RotationSpec::about_coordinate_axis`] matrices, i.e.
//! the pullbacks of right-handed Euclidean rotations. `P = (1/√a1, 0, 0)` is
//! the B-unit point on the x-axis.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::curve::Curve;
use crate::darboux::{frame_integrate, CurvatureProfile, DarbouxFrame};
use crate::error::{Error, Result};
use crate::metric::{EllipticMetric, Matrix3, RotationSpec, Vec3};

/// Largest denominator tried when looking for a closing period.
pub const MAX_PERIOD_TURNS: u32 = 100;

fn rot(axis: usize, angle: f64, m: &EllipticMetric) -> Matrix3 {
    RotationSpec::about_coordinate_axis(axis, angle, *m).matrix()
}

/// Smallest `q ≤ 100` such that `rate · q` is an integer, giving the
/// parameter period `2π q` of a curve mixing frequencies 1 and `rate`.
pub fn closing_turns(rate: f64) -> Option<u32> {
    (1..=MAX_PERIOD_TURNS).find(|&q| {
        let x = rate * q as f64;
        (x - x.round()).abs() < 1e-9 * q as f64
    })
}

fn closing_domain(rate: f64) -> (f64, f64) {
    (0.0, 2.0 * PI * closing_turns(rate).unwrap_or(MAX_PERIOD_TURNS) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HelixParams {
    pub k: f64,
    pub radius: f64,
    pub metric: EllipticMetric,
}

impl HelixParams {
    pub fn new(k: f64, metric: EllipticMetric) -> Self {
        Self {
            k,
            radius: 1.0,
            metric,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.k > 0.0 && self.k < 1.0) {
            return Err(Error::domain(format!("helix needs 0 < k < 1, got {}", self.k)));
        }
        check_radius(self.radius)
    }

    /// One full closed period in the raw parameter.
    pub fn domain(&self) -> (f64, f64) {
        closing_domain(self.k)
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("radius must be positive, got {r}")))
    }
}

/// `R ((k cos t cos kt + sin t sin kt)/√a1, (k sin t cos kt - cos t sin kt)/√a2,
/// √(1-k²) cos kt/√a3)`.
pub fn helix(p: &HelixParams) -> Result<Curve> {
    p.validate()?;
    let HelixParams { k, radius, metric } = *p;
    let [a1, a2, a3] = metric.coefficients().map(f64::sqrt);
    let w = (1.0 - k * k).sqrt();
    Ok(Curve::analytic(metric, p.domain(), move |t| {
        let (st, ct) = t.sin_cos();
        let (sk, ck) = (k * t).sin_cos();
        Vec3::new(
            (k * ct * ck + st * sk) / a1,
            (k * st * ck - ct * sk) / a2,
            w * ck / a3,
        ) * radius
    })?
    .with_radius(Some(radius))
    .with_label(format!("helix k={k}")))
}

/// `R · Rz(t) · Ry(-arccos k) · Rz(-kt) · P`: the point rolls backwards
/// along a great ellipse tilted by `arccos k` while that ellipse turns.
pub fn helix_composed(p: &HelixParams) -> Result<Curve> {
    p.validate()?;
    let HelixParams { k, radius, metric } = *p;
    let tilt = rot(1, -k.acos(), &metric);
    let start = metric.unit_axis(0);
    Ok(Curve::analytic(metric, p.domain(), move |t| {
        rot(2, t, &metric) * tilt * rot(2, -k * t, &metric) * start * radius
    })?
    .with_radius(Some(radius))
    .with_label(format!("helix k={k} (composed)")))
}

/// Raw parameters in `domain` where the helix speed vanishes (`t = nπ/k`).
pub fn helix_cusps(k: f64, domain: (f64, f64)) -> Vec<f64> {
    if !(k > 0.0) {
        return Vec::new();
    }
    let first = (domain.0 * k / PI).ceil() as i64;
    let last = (domain.1 * k / PI).floor() as i64;
    (first..=last).map(|n| n as f64 * PI / k).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SatelliteParams {
    pub alpha: f64,
    pub k: f64,
    pub radius: f64,
    pub metric: EllipticMetric,
}

impl SatelliteParams {
    pub fn new(alpha: f64, k: f64, metric: EllipticMetric) -> Self {
        Self {
            alpha,
            k,
            radius: 1.0,
            metric,
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        closing_domain(self.k)
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.k.is_finite()) {
            return Err(Error::domain("satellite parameters must be finite"));
        }
        check_radius(self.radius)
    }
}

/// `R ((cos t cos kt cos α - sin t sin kt)/√a1,
/// (sin t cos kt cos α + cos t sin kt)/√a2, cos kt sin α/√a3)`.
pub fn satellite(p: &SatelliteParams) -> Result<Curve> {
    p.validate()?;
    let SatelliteParams {
        alpha,
        k,
        radius,
        metric,
    } = *p;
    let [a1, a2, a3] = metric.coefficients().map(f64::sqrt);
    let (sa, ca) = alpha.sin_cos();
    Ok(Curve::analytic(metric, p.domain(), move |t| {
        let (st, ct) = t.sin_cos();
        let (sk, ck) = (k * t).sin_cos();
        Vec3::new(
            (ct * ck * ca - st * sk) / a1,
            (st * ck * ca + ct * sk) / a2,
            ck * sa / a3,
        ) * radius
    })?
    .with_radius(Some(radius))
    .with_label(format!("satellite alpha={alpha} k={k}")))
}

/// `R · Rz(t) · Ry(-α) · Rz(kt) · P`.
pub fn satellite_composed(p: &SatelliteParams) -> Result<Curve> {
    p.validate()?;
    let SatelliteParams {
        alpha,
        k,
        radius,
        metric,
    } = *p;
    let tilt = rot(1, -alpha, &metric);
    let start = metric.unit_axis(0);
    Ok(Curve::analytic(metric, p.domain(), move |t| {
        rot(2, t, &metric) * tilt * rot(2, k * t, &metric) * start * radius
    })?
    .with_radius(Some(radius))
    .with_label(format!("satellite alpha={alpha} k={k} (composed)")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OmegaMode {
    /// `ω = arccos(-b/a)`: the curve lies on the sphere of radius `a`.
    Spherical,
    /// `ω = 0`.
    Epi,
    /// `ω = π`.
    Hypo,
}

impl OmegaMode {
    pub fn omega(self, a: f64, b: f64) -> Result<f64> {
        match self {
            OmegaMode::Spherical => {
                let c = -b / a;
                if c.abs() > 1.0 {
                    return Err(Error::domain(format!(
                        "no spherical cycloid for b > a (a = {a}, b = {b})"
                    )));
                }
                Ok(c.acos())
            }
            OmegaMode::Epi => Ok(0.0),
            OmegaMode::Hypo => Ok(PI),
        }
    }
}

impl std::str::FromStr for OmegaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spherical" => Ok(OmegaMode::Spherical),
            "epi" => Ok(OmegaMode::Epi),
            "hypo" => Ok(OmegaMode::Hypo),
            _ => Err(Error::domain(format!("unknown omega mode `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycloidParams {
    /// Radius of the fixed ellipse.
    pub a: f64,
    /// Radius of the rolling ellipse.
    pub b: f64,
    /// Angle between the planes of the two ellipses.
    pub omega: f64,
    pub metric: EllipticMetric,
}

impl CycloidParams {
    pub fn new(a: f64, b: f64, omega: f64, metric: EllipticMetric) -> Self {
        Self { a, b, omega, metric }
    }

    pub fn with_mode(a: f64, b: f64, mode: OmegaMode, metric: EllipticMetric) -> Result<Self> {
        Ok(Self::new(a, b, mode.omega(a, b)?, metric))
    }

    /// Rolling ratio `q = a / b`.
    pub fn q(&self) -> f64 {
        self.a / self.b
    }

    /// `Some(a)` when `ω = arccos(-b/a)`, else `None`.
    pub fn sphere_radius(&self) -> Option<f64> {
        let c = -self.b / self.a;
        (c.abs() <= 1.0 && (self.omega.cos() - c).abs() < 1e-12).then_some(self.a)
    }

    pub fn domain(&self) -> (f64, f64) {
        closing_domain(self.q())
    }

    fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.b > 0.0 && self.a.is_finite() && self.b.is_finite()) {
            return Err(Error::domain("cycloid radii must be positive"));
        }
        if !self.omega.is_finite() {
            return Err(Error::domain("cycloid angle must be finite"));
        }
        Ok(())
    }
}

/// With `u = 1 - cos qt` and `A = a + b u cos ω`:
/// `((A cos t + b sin qt sin t)/√a1, (A sin t - b sin qt cos t)/√a2, -b u sin ω/√a3)`.
pub fn cycloid(p: &CycloidParams) -> Result<Curve> {
    p.validate()?;
    let CycloidParams { a, b, omega, metric } = *p;
    let q = p.q();
    let [r1, r2, r3] = metric.coefficients().map(f64::sqrt);
    let (so, co) = omega.sin_cos();
    Ok(Curve::analytic(metric, p.domain(), move |t| {
        let (st, ct) = t.sin_cos();
        let (sq, cq) = (q * t).sin_cos();
        let u = 1.0 - cq;
        let big = a + b * u * co;
        Vec3::new(
            (big * ct + b * sq * st) / r1,
            (big * st - b * sq * ct) / r2,
            -b * u * so / r3,
        )
    })?
    .with_radius(p.sphere_radius())
    .with_label(format!("cycloid a={a} b={b} omega={omega}")))
}

/// `Rz(t) · (a P + Ry(ω) · b (P - Rz(qt) P))`: a point of the rolling
/// ellipse, tilted by `ω`, carried a distance `a` out and around the fixed one.
pub fn cycloid_composed(p: &CycloidParams) -> Result<Curve> {
    p.validate()?;
    let CycloidParams { a, b, omega, metric } = *p;
    let q = p.q();
    let tilt = rot(1, omega, &metric);
    let e = metric.unit_axis(0);
    Ok(Curve::analytic(metric, p.domain(), move |t| {
        let rolling = (e - rot(2, q * t, &metric) * e) * b;
        rot(2, t, &metric) * (e * a + tilt * rolling)
    })?
    .with_radius(p.sphere_radius())
    .with_label(format!("cycloid a={a} b={b} omega={omega} (composed)")))
}

/// `γ(s) = η₁ + η₂ sin((c²+1)s) + η₃ cos((c²+1)s)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleParams {
    pub eta1: Vec3,
    pub eta2: Vec3,
    pub eta3: Vec3,
    pub c: f64,
    pub metric: EllipticMetric,
}

impl CircleParams {
    /// `(cos 3s/√(2a1), sin 3s/√(2a2), 1/√(2a3))`.
    pub fn example_4_1(metric: EllipticMetric) -> Self {
        let [a1, a2, a3] = metric.coefficients();
        Self {
            eta1: Vec3::new(0.0, 0.0, 1.0 / (2.0 * a3).sqrt()),
            eta2: Vec3::new(0.0, 1.0 / (2.0 * a2).sqrt(), 0.0),
            eta3: Vec3::new(1.0 / (2.0 * a1).sqrt(), 0.0, 0.0),
            c: 2f64.sqrt(),
            metric,
        }
    }

    /// `(cos 3s/√(2a1), 1/√(2a2), sin 3s/√(2a3))`.
    pub fn example_4_2(metric: EllipticMetric) -> Self {
        let [a1, a2, a3] = metric.coefficients();
        Self {
            eta1: Vec3::new(0.0, 1.0 / (2.0 * a2).sqrt(), 0.0),
            eta2: Vec3::new(0.0, 0.0, 1.0 / (2.0 * a3).sqrt()),
            eta3: Vec3::new(1.0 / (2.0 * a1).sqrt(), 0.0, 0.0),
            c: 2f64.sqrt(),
            metric,
        }
    }

    pub fn frequency(&self) -> f64 {
        self.c * self.c + 1.0
    }

    /// One period `2π / (c² + 1)` of the printed parameter.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.frequency()
    }
}

/// The circle of [`CircleParams`], checked to lie on the unit sphere within
/// `1e-8` over one period.
pub fn circle_constant_kg(p: &CircleParams) -> Result<Curve> {
    let CircleParams {
        eta1,
        eta2,
        eta3,
        metric,
        ..
    } = *p;
    let w = p.frequency();
    if !w.is_finite() {
        return Err(Error::domain("circle frequency must be finite"));
    }
    let c = Curve::analytic(metric, (0.0, p.period()), move |s| {
        let (sn, cs) = (w * s).sin_cos();
        eta1 + eta2 * sn + eta3 * cs
    })?
    .with_label(format!("circle c={}", p.c));
    c.check_on_sphere(256, 1e-8)?;
    Ok(c)
}

/// The unit-speed great ellipse `(cos s/√a1, sin s/√a2, 0)`.
pub fn equator(metric: EllipticMetric) -> Curve {
    let [a1, a2, _] = metric.coefficients().map(f64::sqrt);
    Curve::analytic(metric, (0.0, 2.0 * PI), move |s| {
        Vec3::new(s.cos() / a1, s.sin() / a2, 0.0)
    })
    .expect("fixed domain is valid")
    .with_unit_speed(true)
    .with_label("equator")
}

/// The unit-speed curve with `k_g(s) = s`, integrated from the equatorial
/// frame over `[0, length]`.
pub fn linear_kg_curve(metric: EllipticMetric, length: f64) -> Result<Curve> {
    let c = frame_integrate(
        &CurvatureProfile::linear(1.0, 0.0),
        &DarbouxFrame::equatorial(&metric),
        length,
        &metric,
    )?;
    Ok(c.with_label("linear k_g = s"))
}
