//! Parametric curves in `(R³, B)`, either given by a closed-form position
//! function or by samples on a uniform parameter grid.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::metric::{EllipticMetric, Matrix3, Vec3};
use crate::numerics::fd::{differentiate_uniform, fd_derivative_o4, Order};
use crate::numerics::interp::QuinticSegment;

/// Steps for the fourth-order stencils used on closed-form curves.
pub const JET_STEP: f64 = 1e-3;
pub const JET_STEP_THIRD: f64 = 5e-3;

pub type PositionFn = Arc<dyn Fn(f64) -> Vec3 + Send + Sync>;

/// Position and the first three parameter derivatives at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub p: Vec3,
    pub d1: Vec3,
    pub d2: Vec3,
    pub d3: Vec3,
}

/// Positions, velocities and accelerations on a uniform grid `s0 + i h`,
/// joined by quintic Hermite segments (C² overall).
#[derive(Clone, Debug, PartialEq)]
pub struct SampledCurve {
    s0: f64,
    h: f64,
    points: Vec<Vec3>,
    velocities: Vec<Vec3>,
    accelerations: Vec<Vec3>,
}

impl SampledCurve {
    pub fn new(
        s0: f64,
        h: f64,
        points: Vec<Vec3>,
        velocities: Vec<Vec3>,
        accelerations: Vec<Vec3>,
    ) -> Result<Self> {
        let n = points.len();
        if n < 2 || velocities.len() != n || accelerations.len() != n {
            return Err(Error::domain(
                "sampled curve needs at least two samples with matching derivative arrays",
            ));
        }
        if !(h > 0.0 && h.is_finite() && s0.is_finite()) {
            return Err(Error::domain("sample spacing must be positive and finite"));
        }
        Ok(Self {
            s0,
            h,
            points,
            velocities,
            accelerations,
        })
    }

    /// Builds a curve from positions alone; derivatives come from
    /// fourth-order differences. `params` must be uniform.
    pub fn from_points(params: &[f64], points: Vec<Vec3>) -> Result<Self> {
        if params.len() != points.len() {
            return Err(Error::domain("params and points differ in length"));
        }
        if params.len() < 5 {
            return Err(Error::domain("need at least five samples"));
        }
        let h = uniform_spacing(params)
            .ok_or_else(|| Error::domain("sample params must be uniformly spaced"))?;
        let velocities = differentiate_uniform(&points, h);
        let accelerations = differentiate_uniform(&velocities, h);
        Self::new(params[0], h, points, velocities, accelerations)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn params(&self) -> Vec<f64> {
        (0..self.points.len())
            .map(|i| self.s0 + i as f64 * self.h)
            .collect()
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn velocities(&self) -> &[Vec3] {
        &self.velocities
    }

    pub fn accelerations(&self) -> &[Vec3] {
        &self.accelerations
    }

    fn domain(&self) -> (f64, f64) {
        (self.s0, self.s0 + (self.points.len() - 1) as f64 * self.h)
    }

    fn jet(&self, s: f64) -> Jet {
        let n = self.points.len();
        let x = (s - self.s0) / self.h;
        let i = (x.floor().max(0.0) as usize).min(n - 2);
        let u = x - i as f64;
        let seg = QuinticSegment::new(
            self.points[i],
            self.velocities[i],
            self.accelerations[i],
            self.points[i + 1],
            self.velocities[i + 1],
            self.accelerations[i + 1],
            self.h,
        );
        let [p, d1, d2, d3] = seg.jet(u);
        Jet { p, d1, d2, d3 }
    }

    fn mapped(&self, m: &Matrix3) -> Self {
        let map = |v: &[Vec3]| v.iter().map(|x| m * x).collect();
        Self {
            s0: self.s0,
            h: self.h,
            points: map(&self.points),
            velocities: map(&self.velocities),
            accelerations: map(&self.accelerations),
        }
    }
}

/// Spacing of `params` if uniform to `1e-9` relative, else `None`.
pub fn uniform_spacing(params: &[f64]) -> Option<f64> {
    let n = params.len();
    if n < 2 {
        return None;
    }
    let h = (params[n - 1] - params[0]) / (n - 1) as f64;
    if !(h > 0.0) {
        return None;
    }
    let tol = 1e-9 * (h + params[0].abs() + params[n - 1].abs());
    params
        .iter()
        .enumerate()
        .all(|(i, &p)| (p - (params[0] + i as f64 * h)).abs() <= tol)
        .then_some(h)
}

#[derive(Clone)]
pub enum CurveForm {
    Analytic(PositionFn),
    Sampled(SampledCurve),
}

impl fmt::Debug for CurveForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveForm::Analytic(_) => f.write_str("Analytic(..)"),
            CurveForm::Sampled(s) => write!(f, "Sampled({} samples)", s.len()),
        }
    }
}

/// A curve with its metric, parameter domain and the sphere it claims to lie on.
#[derive(Clone, Debug)]
pub struct Curve {
    metric: EllipticMetric,
    form: CurveForm,
    domain: (f64, f64),
    radius: Option<f64>,
    unit_speed: bool,
    label: String,
    /// Linear map applied after an analytic position function; jets are
    /// mapped rather than re-differentiated.
    linear: Matrix3,
}

impl Curve {
    /// A closed-form curve on the unit elliptical sphere.
    pub fn analytic(
        metric: EllipticMetric,
        domain: (f64, f64),
        f: impl Fn(f64) -> Vec3 + Send + Sync + 'static,
    ) -> Result<Self> {
        check_domain(domain)?;
        Ok(Self {
            metric,
            form: CurveForm::Analytic(Arc::new(f)),
            domain,
            radius: Some(1.0),
            unit_speed: false,
            label: String::new(),
            linear: Matrix3::identity(),
        })
    }

    pub fn sampled(metric: EllipticMetric, samples: SampledCurve) -> Self {
        let domain = samples.domain();
        Self {
            metric,
            form: CurveForm::Sampled(samples),
            domain,
            radius: Some(1.0),
            unit_speed: false,
            label: String::new(),
            linear: Matrix3::identity(),
        }
    }

    /// Declares the B-radius of the sphere the curve lies on, or `None` for
    /// a curve that is not spherical.
    pub fn with_radius(mut self, radius: Option<f64>) -> Self {
        self.radius = radius;
        self
    }

    pub fn with_unit_speed(mut self, unit_speed: bool) -> Self {
        self.unit_speed = unit_speed;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// The same curve on a sub-interval of its domain.
    pub fn restricted(&self, domain: (f64, f64)) -> Result<Self> {
        check_domain(domain)?;
        if let CurveForm::Sampled(_) = self.form {
            let tol = 1e-12 * (self.domain.1 - self.domain.0);
            if domain.0 < self.domain.0 - tol || domain.1 > self.domain.1 + tol {
                return Err(Error::domain("cannot extend a sampled curve beyond its samples"));
            }
        }
        let mut c = self.clone();
        c.domain = domain;
        Ok(c)
    }

    pub fn metric(&self) -> &EllipticMetric {
        &self.metric
    }

    pub fn form(&self) -> &CurveForm {
        &self.form
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn radius(&self) -> Option<f64> {
        self.radius
    }

    pub fn is_unit_speed(&self) -> bool {
        self.unit_speed
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn position(&self, s: f64) -> Vec3 {
        match &self.form {
            CurveForm::Analytic(f) => self.linear * f(s),
            CurveForm::Sampled(c) => c.jet(s).p,
        }
    }

    pub fn jet(&self, s: f64) -> Jet {
        match &self.form {
            CurveForm::Analytic(f) => Jet {
                p: self.linear * f(s),
                d1: self.linear * fd_derivative_o4(&**f, s, Order::First, JET_STEP),
                d2: self.linear * fd_derivative_o4(&**f, s, Order::Second, JET_STEP),
                d3: self.linear * fd_derivative_o4(&**f, s, Order::Third, JET_STEP_THIRD),
            },
            CurveForm::Sampled(c) => c.jet(s),
        }
    }

    /// B-norm of the parameter velocity.
    pub fn speed(&self, s: f64) -> f64 {
        self.metric.norm(&self.jet(s).d1)
    }

    /// `n` uniformly spaced parameters spanning the domain.
    pub fn sample_params(&self, n: usize) -> Vec<f64> {
        linspace(self.domain.0, self.domain.1, n)
    }

    /// `n` uniformly spaced parameters strictly inside the domain, keeping
    /// `margin` (as a fraction of the length) away from each end.
    pub fn interior_params(&self, n: usize, margin: f64) -> Vec<f64> {
        let (a, b) = self.domain;
        let d = margin * (b - a);
        linspace(a + d, b - d, n)
    }

    pub fn sample(&self, n: usize) -> Vec<(f64, Vec3)> {
        self.sample_params(n)
            .into_iter()
            .map(|s| (s, self.position(s)))
            .collect()
    }

    /// Applies a linear map pointwise.
    pub fn transformed(&self, m: &Matrix3) -> Self {
        match &self.form {
            CurveForm::Analytic(_) => Self {
                linear: m * self.linear,
                ..self.clone()
            },
            CurveForm::Sampled(c) => Self {
                form: CurveForm::Sampled(c.mapped(m)),
                ..self.clone()
            },
        }
    }

    /// Multiplies positions by `factor`; the declared radius scales with it.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut c = self.transformed(&(Matrix3::identity() * factor));
        c.radius = self.radius.map(|r| r * factor.abs());
        c.unit_speed = self.unit_speed && (factor.abs() - 1.0).abs() < 1e-15;
        c
    }

    /// Rescales a spherical curve onto the unit elliptical sphere.
    pub fn to_unit_sphere(&self) -> Result<Self> {
        match self.radius {
            Some(r) if r > 0.0 => {
                if r == 1.0 {
                    Ok(self.clone())
                } else {
                    Ok(self.scaled(1.0 / r))
                }
            }
            _ => Err(Error::domain("curve is not declared spherical")),
        }
    }

    /// The image under the round-sphere map, as a curve for the metric (1,1,1).
    pub fn to_round(&self) -> Self {
        let mut c = self.transformed(&self.metric.scaling());
        c.metric = EllipticMetric::round();
        c
    }

    /// Largest `|B(p, p) - r²|` over `n` uniform samples.
    pub fn sphere_deviation(&self, n: usize) -> Result<f64> {
        let r = self
            .radius
            .ok_or_else(|| Error::domain("curve is not declared spherical"))?;
        Ok(self
            .sample_params(n)
            .into_iter()
            .map(|s| {
                let p = self.position(s);
                (self.metric.inner(&p, &p) - r * r).abs()
            })
            .fold(0.0, nan_max))
    }

    /// Fails with [`Error::OffSphere`] if the deviation exceeds `tol`.
    pub fn check_on_sphere(&self, n: usize, tol: f64) -> Result<()> {
        let dev = self.sphere_deviation(n)?;
        if dev <= tol {
            Ok(())
        } else {
            Err(Error::OffSphere(dev))
        }
    }
}

/// `max` that lets NaN win, so a corrupted sample is never hidden.
pub fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    b
                } else {
                    a + (b - a) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

fn check_domain(domain: (f64, f64)) -> Result<()> {
    if domain.0.is_finite() && domain.1.is_finite() && domain.1 > domain.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "invalid curve domain [{}, {}]",
            domain.0, domain.1
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn metric() -> EllipticMetric {
        EllipticMetric::new(4.0, 9.0, 16.0).unwrap()
    }

    fn great_ellipse() -> Curve {
        let m = metric();
        Curve::analytic(m, (0.0, 6.0), move |s| {
            Vec3::new(s.cos() / 2.0, s.sin() / 3.0, 0.0)
        })
        .unwrap()
    }

    #[test]
    fn analytic_jet_matches_derivatives() {
        let c = great_ellipse();
        let j = c.jet(0.7);
        let s = 0.7f64;
        assert!((j.d1 - Vec3::new(-s.sin() / 2.0, s.cos() / 3.0, 0.0)).norm() < 1e-11);
        assert!((j.d2 + j.p).norm() < 1e-9);
        assert!((j.d3 - Vec3::new(s.sin() / 2.0, -s.cos() / 3.0, 0.0)).norm() < 1e-7);
        assert!((c.speed(s) - 1.0).abs() < 1e-11);
    }

    #[test]
    fn sampled_curve_interpolates_closely() {
        let c = great_ellipse();
        let params = linspace(0.0, 6.0, 601);
        let pts: Vec<Vec3> = params.iter().map(|&s| c.position(s)).collect();
        let sc = Curve::sampled(metric(), SampledCurve::from_points(&params, pts).unwrap());
        for s in [0.005, 1.234, 3.0, 5.99] {
            let a = sc.jet(s);
            let b = c.jet(s);
            assert!((a.p - b.p).norm() < 1e-10, "{s}");
            assert!((a.d1 - b.d1).norm() < 1e-7, "{s}");
        }
    }

    #[test]
    fn transformations_keep_sphere() {
        let c = great_ellipse();
        assert!(c.sphere_deviation(100).unwrap() < 1e-15);
        let big = c.scaled(3.0);
        assert_eq!(big.radius(), Some(3.0));
        assert!(big.sphere_deviation(100).unwrap() < 1e-13);
        let back = big.to_unit_sphere().unwrap();
        assert!(back.sphere_deviation(100).unwrap() < 1e-15);
        let round = c.to_round();
        let p = round.position(1.0);
        assert!((p.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn off_sphere_is_reported() {
        let c = great_ellipse().scaled(1.1).with_radius(Some(1.0));
        assert!(matches!(c.check_on_sphere(10, 1e-8), Err(Error::OffSphere(_))));
    }

    #[test]
    fn restriction_of_samples_is_bounded() {
        let params = linspace(0.0, 1.0, 11);
        let pts = params.iter().map(|&s| Vec3::new(s, 0.0, 0.0)).collect();
        let c = Curve::sampled(metric(), SampledCurve::from_points(&params, pts).unwrap());
        assert!(c.restricted((0.2, 0.8)).is_ok());
        assert!(c.restricted((0.2, 1.8)).is_err());
    }

    #[test]
    fn non_uniform_params_are_rejected() {
        let params = [0.0, 0.1, 0.2, 0.35, 0.4];
        let pts = vec![Vec3::zeros(); 5];
        assert!(SampledCurve::from_points(&params, pts).is_err());
    }
}
