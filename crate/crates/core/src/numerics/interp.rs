//! Piecewise interpolants: monotone cubic (PCHIP) and quintic Hermite.

use crate::error::{Error, Result};

/// Fritsch–Carlson monotone cubic interpolant of scalar data.
#[derive(Clone, Debug)]
pub struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl Pchip {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 2 || y.len() != n {
            return Err(Error::domain("pchip needs at least two (x, y) pairs of equal length"));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("pchip abscissae must be strictly increasing"));
        }
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
        let mut d = vec![0.0; n];
        if n == 2 {
            d[0] = delta[0];
            d[1] = delta[0];
        } else {
            for i in 1..n - 1 {
                if delta[i - 1] * delta[i] <= 0.0 {
                    d[i] = 0.0;
                } else {
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
                }
            }
            d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Ok(Self { x, y, d })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let i = match self.x.partition_point(|&v| v <= t) {
            0 => 0,
            k if k >= n => n - 2,
            k => k - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let u = (t - self.x[i]) / h;
        let h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
        let h10 = u * (1.0 - u) * (1.0 - u);
        let h01 = u * u * (3.0 - 2.0 * u);
        let h11 = u * u * (u - 1.0);
        h00 * self.y[i] + h10 * h * self.d[i] + h01 * self.y[i + 1] + h11 * h * self.d[i + 1]
    }
}

fn end_slope(h0: f64, h1: f64, del0: f64, del1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if d.signum() != del0.signum() {
        0.0
    } else if del0.signum() != del1.signum() && d.abs() > 3.0 * del0.abs() {
        3.0 * del0
    } else {
        d
    }
}

/// Quintic on `u ∈ [0, 1]` matching value, first and second derivative at
/// both ends of a segment of length `h`.
#[derive(Clone, Copy, Debug)]
pub struct QuinticSegment<V> {
    c: [V; 6],
    h: f64,
}

impl<V> QuinticSegment<V>
where
    V: Copy + std::ops::Add<Output = V> + std::ops::Sub<Output = V> + std::ops::Mul<f64, Output = V>,
{
    #[allow(clippy::too_many_arguments)]
    pub fn new(p0: V, v0: V, a0: V, p1: V, v1: V, a1: V, h: f64) -> Self {
        let dp = p1 - p0;
        let hv0 = v0 * h;
        let hv1 = v1 * h;
        let ha0 = a0 * (h * h);
        let ha1 = a1 * (h * h);
        let c3 = dp * 10.0 - hv0 * 6.0 - hv1 * 4.0 - ha0 * 1.5 + ha1 * 0.5;
        let c4 = dp * (-15.0) + hv0 * 8.0 + hv1 * 7.0 + ha0 * 1.5 - ha1;
        let c5 = dp * 6.0 - hv0 * 3.0 - hv1 * 3.0 - ha0 * 0.5 + ha1 * 0.5;
        Self {
            c: [p0, hv0, ha0 * 0.5, c3, c4, c5],
            h,
        }
    }

    /// Value and the first three derivatives with respect to the physical
    /// parameter at local coordinate `u`.
    pub fn jet(&self, u: f64) -> [V; 4] {
        let c = &self.c;
        let p = c[0] + (c[1] + (c[2] + (c[3] + (c[4] + c[5] * u) * u) * u) * u) * u;
        let d1 = c[1] + (c[2] * 2.0 + (c[3] * 3.0 + (c[4] * 4.0 + c[5] * (5.0 * u)) * u) * u) * u;
        let d2 = c[2] * 2.0 + (c[3] * 6.0 + (c[4] * 12.0 + c[5] * (20.0 * u)) * u) * u;
        let d3 = c[3] * 6.0 + (c[4] * 24.0 + c[5] * (60.0 * u)) * u;
        let ih = 1.0 / self.h;
        [p, d1 * ih, d2 * (ih * ih), d3 * (ih * ih * ih)]
    }
}
