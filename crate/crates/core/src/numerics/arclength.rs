//! Arclength tables and resampling at unit B-speed.

use crate::curve::{Curve, SampledCurve};
use crate::error::{Error, Result};
use crate::numerics::interp::Pchip;

/// Below this B-speed a curve is treated as singular.
pub const MIN_SPEED: f64 = 1e-8;

/// Fine-grid intervals per requested output sample.
pub const OVERSAMPLING: usize = 8;

const GAUSS5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_08),
    (0.906_179_845_938_664, 0.236_926_885_056_189_08),
];

/// Cumulative B-arclength at `intervals + 1` uniform parameters, by
/// Simpson's rule on each interval.
pub fn arclength_table(c: &Curve, intervals: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let intervals = intervals.max(1);
    let (a, b) = c.domain();
    let h = (b - a) / intervals as f64;
    let speed = |s: f64| -> Result<f64> {
        let v = c.speed(s);
        if !(v >= MIN_SPEED) {
            return Err(Error::Regularity { s, speed: v });
        }
        Ok(v)
    };
    let mut params = Vec::with_capacity(intervals + 1);
    let mut lengths = Vec::with_capacity(intervals + 1);
    params.push(a);
    lengths.push(0.0);
    let mut v0 = speed(a)?;
    let mut total = 0.0;
    for i in 0..intervals {
        let s0 = a + i as f64 * h;
        let s1 = if i + 1 == intervals { b } else { s0 + h };
        let vm = speed(0.5 * (s0 + s1))?;
        let v1 = speed(s1)?;
        total += (s1 - s0) / 6.0 * (v0 + 4.0 * vm + v1);
        params.push(s1);
        lengths.push(total);
        v0 = v1;
    }
    Ok((params, lengths))
}

fn partial_length(c: &Curve, s0: f64, s1: f64) -> f64 {
    let mid = 0.5 * (s0 + s1);
    let half = 0.5 * (s1 - s0);
    GAUSS5
        .iter()
        .map(|(x, w)| w * c.speed(mid + half * x))
        .sum::<f64>()
        * half
}

/// Resamples `c` at `n` points equally spaced in B-arclength.
///
/// The result is a sampled unit-speed curve parameterized by arclength from
/// 0, carrying unit tangents and arclength accelerations at every node.
pub fn reparameterize_arclength(c: &Curve, n: usize) -> Result<Curve> {
    if n < 5 {
        return Err(Error::domain("arclength resampling needs at least five samples"));
    }
    let (taus, lengths) = arclength_table(c, OVERSAMPLING * n)?;
    let total = *lengths.last().unwrap();
    let inverse = Pchip::new(lengths.clone(), taus.clone())?;
    let (a, b) = c.domain();
    let fine_h = (b - a) / (taus.len() - 1) as f64;
    let m = c.metric();
    let h = total / (n - 1) as f64;

    let mut points = Vec::with_capacity(n);
    let mut velocities = Vec::with_capacity(n);
    let mut accelerations = Vec::with_capacity(n);
    for j in 0..n {
        let target = if j == n - 1 { total } else { j as f64 * h };
        let mut tau = inverse.eval(target).clamp(a, b);
        if j > 0 && j < n - 1 {
            for _ in 0..4 {
                let i = (((tau - a) / fine_h).floor().max(0.0) as usize).min(taus.len() - 2);
                let l = lengths[i] + partial_length(c, taus[i], tau);
                let step = (l - target) / c.speed(tau);
                tau = (tau - step).clamp(a, b);
                if step.abs() < 1e-15 * (1.0 + tau.abs()) {
                    break;
                }
            }
        } else if j == n - 1 {
            tau = b;
        } else {
            tau = a;
        }
        let jet = c.jet(tau);
        let v = m.norm(&jet.d1);
        if !(v >= MIN_SPEED) {
            return Err(Error::Regularity { s: tau, speed: v });
        }
        let t = jet.d1 / v;
        let along = m.inner(&jet.d1, &jet.d2) / (v * v);
        points.push(jet.p);
        velocities.push(t);
        accelerations.push((jet.d2 - jet.d1 * along) / (v * v));
    }
    let samples = SampledCurve::new(0.0, h, points, velocities, accelerations)?;
    Ok(Curve::sampled(*m, samples)
        .with_radius(c.radius())
        .with_unit_speed(true)
        .with_label(c.label()))
}
