//! Central finite-difference stencils.

use std::ops::{Add, Mul, Sub};

/// Anything a stencil can combine: scalars and vectors.
pub trait FdValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {}

impl<T> FdValue for T where T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T> {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    First,
    Second,
    Third,
}

impl Order {
    pub fn from_index(n: usize) -> Option<Self> {
        match n {
            1 => Some(Order::First),
            2 => Some(Order::Second),
            3 => Some(Order::Third),
            _ => None,
        }
    }

    /// Default step: `1e-5` for first and second derivatives, `1e-4` for the third.
    pub fn default_step(self) -> f64 {
        match self {
            Order::First | Order::Second => 1e-5,
            Order::Third => 1e-4,
        }
    }
}

/// O(h²) central stencils:
/// `(f(s+h) - f(s-h)) / 2h`, `(f(s+h) - 2f(s) + f(s-h)) / h²`, and
/// `(f(s+2h) - 2f(s+h) + 2f(s-h) - f(s-2h)) / 2h³`.
pub fn fd_derivative<V: FdValue>(f: impl Fn(f64) -> V, s: f64, order: Order, h: f64) -> V {
    match order {
        Order::First => (f(s + h) - f(s - h)) * (0.5 / h),
        Order::Second => (f(s + h) - f(s) * 2.0 + f(s - h)) * (1.0 / (h * h)),
        Order::Third => {
            (f(s + 2.0 * h) - f(s + h) * 2.0 + f(s - h) * 2.0 - f(s - 2.0 * h)) * (0.5 / (h * h * h))
        }
    }
}

/// O(h⁴) central stencils (five points for orders 1-2, seven for order 3).
pub fn fd_derivative_o4<V: FdValue>(f: impl Fn(f64) -> V, s: f64, order: Order, h: f64) -> V {
    match order {
        Order::First => {
            let (p1, m1, p2, m2) = (f(s + h), f(s - h), f(s + 2.0 * h), f(s - 2.0 * h));
            ((p1 - m1) * 8.0 - (p2 - m2)) * (1.0 / (12.0 * h))
        }
        Order::Second => {
            let (p1, m1, p2, m2) = (f(s + h), f(s - h), f(s + 2.0 * h), f(s - 2.0 * h));
            ((p1 + m1) * 16.0 - (p2 + m2) - f(s) * 30.0) * (1.0 / (12.0 * h * h))
        }
        Order::Third => {
            let d1 = f(s + h) - f(s - h);
            let d2 = f(s + 2.0 * h) - f(s - 2.0 * h);
            let d3 = f(s + 3.0 * h) - f(s - 3.0 * h);
            (d2 * 8.0 - d1 * 13.0 - d3) * (1.0 / (8.0 * h * h * h))
        }
    }
}

/// First derivative of uniformly spaced samples, fourth-order accurate at
/// every node (one-sided stencils near the ends). Needs at least five samples.
pub fn differentiate_uniform<V: FdValue>(values: &[V], h: f64) -> Vec<V> {
    let n = values.len();
    assert!(n >= 5, "need at least five samples");
    let f = |i: usize| values[i];
    let c = 1.0 / (12.0 * h);
    (0..n)
        .map(|i| {
            if i >= 2 && i + 2 < n {
                ((f(i + 1) - f(i - 1)) * 8.0 - (f(i + 2) - f(i - 2))) * c
            } else if i == 0 {
                (f(1) * 48.0 - f(0) * 25.0 - f(2) * 36.0 + f(3) * 16.0 - f(4) * 3.0) * c
            } else if i == 1 {
                (f(2) * 18.0 - f(0) * 3.0 - f(1) * 10.0 - f(3) * 6.0 + f(4)) * c
            } else if i == n - 2 {
                (f(n - 3) * 18.0 - f(n - 1) * 3.0 - f(n - 2) * 10.0 - f(n - 4) * 6.0 + f(n - 5)) * (-c)
            } else {
                (f(n - 2) * 48.0 - f(n - 1) * 25.0 - f(n - 3) * 36.0 + f(n - 4) * 16.0 - f(n - 5) * 3.0)
                    * (-c)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::Vec3;

    #[test]
    fn square_second_derivative() {
        let d = fd_derivative(|s: f64| s * s, 0.7, Order::Second, Order::Second.default_step());
        assert!((d - 2.0).abs() < 1e-5);
        let d = fd_derivative(|s: f64| s * s, 0.7, Order::Second, 1e-2);
        assert!((d - 2.0).abs() < 1e-10);
    }

    #[test]
    fn sine_first_derivative() {
        let d = fd_derivative(f64::sin, 0.0, Order::First, 1e-5);
        assert!((d - 1.0).abs() < 1e-9);
    }

    #[test]
    fn sine_third_derivative() {
        let d = fd_derivative(f64::sin, 0.0, Order::Third, Order::Third.default_step());
        assert!((d + 1.0).abs() < 1e-4);
    }

    #[test]
    fn fourth_order_stencils_are_exact_on_quartics() {
        let f = |s: f64| 1.0 + s - 2.0 * s * s + 0.5 * s.powi(3) + 0.25 * s.powi(4);
        let s: f64 = 0.3;
        let d1 = 1.0 - 4.0 * s + 1.5 * s * s + s.powi(3);
        let d2 = -4.0 + 3.0 * s + 3.0 * s * s;
        let d3 = 3.0 + 6.0 * s;
        assert!((fd_derivative_o4(f, s, Order::First, 0.1) - d1).abs() < 1e-12);
        assert!((fd_derivative_o4(f, s, Order::Second, 0.1) - d2).abs() < 1e-11);
        assert!((fd_derivative_o4(f, s, Order::Third, 0.1) - d3).abs() < 1e-9);
    }

    #[test]
    fn vector_values() {
        let f = |s: f64| Vec3::new(s.cos(), s.sin(), s);
        let d = fd_derivative_o4(f, 0.4, Order::First, 1e-3);
        assert!((d - Vec3::new(-(0.4f64).sin(), (0.4f64).cos(), 1.0)).norm() < 1e-12);
    }

    #[test]
    fn uniform_samples_are_differentiated_to_fourth_order() {
        let h = 0.01;
        let xs: Vec<f64> = (0..50).map(|i| i as f64 * h).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (2.0 * x).sin()).collect();
        let d = differentiate_uniform(&ys, h);
        for (x, dy) in xs.iter().zip(&d) {
            assert!((dy - 2.0 * (2.0 * x).cos()).abs() < 1e-7, "x={x}");
        }
        let quartic: Vec<f64> = xs.iter().map(|x| x.powi(4) - 3.0 * x * x + x).collect();
        let d = differentiate_uniform(&quartic, h);
        for (x, dy) in xs.iter().zip(&d) {
            assert!((dy - (4.0 * x.powi(3) - 6.0 * x + 1.0)).abs() < 1e-10, "x={x}");
        }
    }
}
