//! The weighted inner product `B(u, v) = a1 u1 v1 + a2 u2 v2 + a3 u3 v3`, its
//! cross product, and the rotations that preserve it.
//!
//! The diagonal map `A = diag(√a1, √a2, √a3)` carries `(R³, B)` isometrically
//! onto Euclidean `R³` and the elliptical sphere onto the unit sphere. It is
//! exposed as [`EllipticMetric::to_round`] / [`EllipticMetric::from_round`] and
//! is what the test suites use as an independent oracle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = nalgebra::Vector3<f64>;
pub type Matrix3 = nalgebra::Matrix3<f64>;

/// Sectional curvature of the unit elliptical sphere. The round-sphere
/// isometry pins it to 1.
pub const SECTIONAL_CURVATURE: f64 = 1.0;

/// Tolerance on `|B(u, u) - 1|` for an axis to count as B-unit.
pub const AXIS_TOLERANCE: f64 = 1e-9;

/// Coefficients `(a1, a2, a3)` of the inner product, plus `Δ = √(a1 a2 a3)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct EllipticMetric {
    a: [f64; 3],
    delta: f64,
}

impl TryFrom<[f64; 3]> for EllipticMetric {
    type Error = Error;

    fn try_from(a: [f64; 3]) -> Result<Self> {
        EllipticMetric::new(a[0], a[1], a[2])
    }
}

impl From<EllipticMetric> for [f64; 3] {
    fn from(m: EllipticMetric) -> Self {
        m.a
    }
}

impl Default for EllipticMetric {
    fn default() -> Self {
        Self::round()
    }
}

impl std::fmt::Display for EllipticMetric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a[0], self.a[1], self.a[2])
    }
}

impl EllipticMetric {
    pub fn new(a1: f64, a2: f64, a3: f64) -> Result<Self> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if !(ok(a1) && ok(a2) && ok(a3)) {
            return Err(Error::InvalidMetric(a1, a2, a3));
        }
        Ok(Self {
            a: [a1, a2, a3],
            delta: (a1 * a2 * a3).sqrt(),
        })
    }

    /// The Euclidean metric `(1, 1, 1)`.
    pub fn round() -> Self {
        Self {
            a: [1.0; 3],
            delta: 1.0,
        }
    }

    pub fn coefficients(&self) -> [f64; 3] {
        self.a
    }

    pub fn a(&self, i: usize) -> f64 {
        self.a[i]
    }

    /// `Δ = √(a1 a2 a3)`.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn inner(&self, u: &Vec3, v: &Vec3) -> f64 {
        self.a[0] * u.x * v.x + self.a[1] * u.y * v.y + self.a[2] * u.z * v.z
    }

    pub fn norm(&self, u: &Vec3) -> f64 {
        self.inner(u, u).sqrt()
    }

    /// Angle between two nonzero vectors, in `[0, π]`.
    pub fn angle(&self, u: &Vec3, v: &Vec3) -> Result<f64> {
        let nu = self.norm(u);
        let nv = self.norm(v);
        if nu == 0.0 || nv == 0.0 {
            return Err(Error::domain("angle with a zero vector"));
        }
        Ok((self.inner(u, v) / (nu * nv)).clamp(-1.0, 1.0).acos())
    }

    /// Elliptical cross product `Δ (c1/a1, c2/a2, c3/a3)` where `c = u × v`.
    pub fn cross(&self, u: &Vec3, v: &Vec3) -> Vec3 {
        let c = u.cross(v);
        Vec3::new(
            self.delta * c.x / self.a[0],
            self.delta * c.y / self.a[1],
            self.delta * c.z / self.a[2],
        )
    }

    /// `(x, y, z) ↦ (√a1 x, √a2 y, √a3 z)`.
    pub fn to_round(&self, p: &Vec3) -> Vec3 {
        Vec3::new(
            self.a[0].sqrt() * p.x,
            self.a[1].sqrt() * p.y,
            self.a[2].sqrt() * p.z,
        )
    }

    pub fn from_round(&self, q: &Vec3) -> Vec3 {
        Vec3::new(
            q.x / self.a[0].sqrt(),
            q.y / self.a[1].sqrt(),
            q.z / self.a[2].sqrt(),
        )
    }

    /// The matrix `A = diag(√a1, √a2, √a3)` of [`Self::to_round`].
    pub fn scaling(&self) -> Matrix3 {
        Matrix3::from_diagonal(&Vec3::new(
            self.a[0].sqrt(),
            self.a[1].sqrt(),
            self.a[2].sqrt(),
        ))
    }

    /// Rescales a nonzero vector to B-norm 1.
    pub fn normalize(&self, u: &Vec3) -> Result<Vec3> {
        let n = self.norm(u);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::domain("cannot normalize a zero vector"));
        }
        Ok(u / n)
    }

    /// B-unit vector along coordinate axis `i` (0 = x, 1 = y, 2 = z).
    pub fn unit_axis(&self, i: usize) -> Vec3 {
        let mut v = Vec3::zeros();
        v[i] = 1.0 / self.a[i].sqrt();
        v
    }

    /// Point of the elliptical sphere with the given spherical angles.
    pub fn sphere_point(&self, polar: f64, azimuth: f64) -> Vec3 {
        self.from_round(&Vec3::new(
            polar.sin() * azimuth.cos(),
            polar.sin() * azimuth.sin(),
            polar.cos(),
        ))
    }

    pub fn check_unit(&self, u: &Vec3) -> Result<()> {
        let b = self.inner(u, u);
        if (b - 1.0).abs() > AXIS_TOLERANCE || !b.is_finite() {
            return Err(Error::NonUnitAxis(b));
        }
        Ok(())
    }
}

/// A B-unit axis, an angle, and the metric they live in.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationSpec {
    axis: Vec3,
    angle: f64,
    metric: EllipticMetric,
}

impl RotationSpec {
    pub fn new(axis: Vec3, angle: f64, metric: EllipticMetric) -> Result<Self> {
        metric.check_unit(&axis)?;
        if !angle.is_finite() {
            return Err(Error::domain("rotation angle must be finite"));
        }
        Ok(Self {
            axis,
            angle,
            metric,
        })
    }

    /// Rotation about the B-unit coordinate axis `i`.
    pub fn about_coordinate_axis(i: usize, angle: f64, metric: EllipticMetric) -> Self {
        Self {
            axis: metric.unit_axis(i),
            angle,
            metric,
        }
    }

    pub fn axis(&self) -> Vec3 {
        self.axis
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn metric(&self) -> EllipticMetric {
        self.metric
    }

    pub fn matrix(&self) -> Matrix3 {
        elliptical_rotation(self)
    }
}

/// The generator `T` with `T p = u ×_E p`:
///
/// ```text
/// Δ ┌   0      -u3/a1   u2/a1 ┐
///   │  u3/a2     0     -u1/a2 │
///   └ -u2/a3   u1/a3     0    ┘
/// ```
pub fn skew_generator(axis: &Vec3, m: &EllipticMetric) -> Result<Matrix3> {
    m.check_unit(axis)?;
    Ok(generator_unchecked(axis, m))
}

fn generator_unchecked(u: &Vec3, m: &EllipticMetric) -> Matrix3 {
    let d = m.delta();
    let [a1, a2, a3] = m.coefficients();
    Matrix3::new(
        0.0,
        -d * u.z / a1,
        d * u.y / a1,
        d * u.z / a2,
        0.0,
        -d * u.x / a2,
        -d * u.y / a3,
        d * u.x / a3,
        0.0,
    )
}

/// Closed-form `e^{Tθ} = I + sin θ T + (1 - cos θ) T²`, written out entrywise.
pub fn elliptical_rotation(spec: &RotationSpec) -> Matrix3 {
    let m = &spec.metric;
    let u = &spec.axis;
    let d = m.delta();
    let [a1, a2, a3] = m.coefficients();
    let (s, c) = spec.angle.sin_cos();
    let v = 1.0 - c;
    let (u1, u2, u3) = (u.x, u.y, u.z);
    Matrix3::new(
        a1 * u1 * u1 + (1.0 - a1 * u1 * u1) * c,
        -d * u3 * s / a1 + a2 * u1 * u2 * v,
        d * u2 * s / a1 + a3 * u1 * u3 * v,
        d * u3 * s / a2 + a1 * u1 * u2 * v,
        a2 * u2 * u2 + (1.0 - a2 * u2 * u2) * c,
        -d * u1 * s / a2 + a3 * u2 * u3 * v,
        -d * u2 * s / a3 + a1 * u1 * u3 * v,
        d * u1 * s / a3 + a2 * u2 * u3 * v,
        a3 * u3 * u3 + (1.0 - a3 * u3 * u3) * c,
    )
}

/// `e^{Tθ}` by scaling and squaring a degree-12 Taylor series. Exists only
/// as an oracle for [`elliptical_rotation`].
pub fn rotation_via_exponential(axis: &Vec3, angle: f64, m: &EllipticMetric) -> Result<Matrix3> {
    let t = skew_generator(axis, m)? * angle;
    Ok(expm_series(&t))
}

fn expm_series(x: &Matrix3) -> Matrix3 {
    let norm = (0..3)
        .map(|j| x.column(j).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = x / 2f64.powi(squarings);
    let mut term = Matrix3::identity();
    let mut sum = Matrix3::identity();
    for k in 1..=12 {
        term = term * scaled / k as f64;
        sum += term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

/// `R(X, Y)Z = C (B(Z, X) Y - B(Z, Y) X)` with `C = 1`.
pub fn riemann_curvature(x: &Vec3, y: &Vec3, z: &Vec3, m: &EllipticMetric) -> Vec3 {
    SECTIONAL_CURVATURE * (m.inner(z, x) * y - m.inner(z, y) * x)
}
