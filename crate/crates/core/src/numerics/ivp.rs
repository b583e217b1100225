//! Adaptive Dormand–Prince 5(4) integration with continuous output.

use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

const MAX_STEPS: usize = 5_000_000;

type Rhs<'a> = Box<dyn Fn(f64, &[f64], &mut [f64]) + 'a>;
type Projection<'a> = Box<dyn Fn(&mut [f64]) + 'a>;

/// Parameter samples with one state vector each.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledPath {
    params: Vec<f64>,
    states: Vec<Vec<f64>>,
}

impl SampledPath {
    pub fn new(params: Vec<f64>, states: Vec<Vec<f64>>) -> Result<Self> {
        if params.len() != states.len() {
            return Err(Error::domain(format!(
                "{} params but {} states",
                params.len(),
                states.len()
            )));
        }
        if params.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("params must be strictly increasing"));
        }
        Ok(Self { params, states })
    }

    /// Scalar samples `values[i]` at `params[i]`.
    pub fn scalar(params: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::new(params, values.into_iter().map(|v| vec![v]).collect())
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn states(&self) -> &[Vec<f64>] {
        &self.states
    }

    pub fn last(&self) -> Option<(f64, &[f64])> {
        self.params
            .last()
            .map(|&s| (s, self.states[self.states.len() - 1].as_slice()))
    }

    pub fn component(&self, i: usize) -> Vec<f64> {
        self.states.iter().map(|y| y[i]).collect()
    }

    /// Grid spacing, if the params are uniform.
    pub fn uniform_step(&self) -> Option<f64> {
        crate::curve::uniform_spacing(&self.params)
    }
}

/// An initial-value problem `y' = rhs(s, y)`, `y(s0) = y0`, integrated to `s1`.
pub struct IvpProblem<'a> {
    pub dimension: usize,
    pub rhs: Rhs<'a>,
    pub s0: f64,
    pub s1: f64,
    pub y0: Vec<f64>,
    pub tolerance: f64,
    pub max_step: f64,
    /// Requested output params; `None` returns every accepted step.
    pub outputs: Option<Vec<f64>>,
    projection: Option<(usize, Projection<'a>)>,
}

impl<'a> IvpProblem<'a> {
    pub fn new(
        rhs: impl Fn(f64, &[f64], &mut [f64]) + 'a,
        s0: f64,
        s1: f64,
        y0: Vec<f64>,
    ) -> Self {
        Self {
            dimension: y0.len(),
            rhs: Box::new(rhs),
            s0,
            s1,
            y0,
            tolerance: DEFAULT_TOLERANCE,
            max_step: 0.01 * (s1 - s0).abs(),
            outputs: None,
            projection: None,
        }
    }

    pub fn tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn max_step(mut self, h: f64) -> Self {
        self.max_step = h;
        self
    }

    pub fn outputs(mut self, params: Vec<f64>) -> Self {
        self.outputs = Some(params);
        self
    }

    /// Applies `project` to the state after every `every` accepted steps.
    pub fn project_every(mut self, every: usize, project: impl Fn(&mut [f64]) + 'a) -> Self {
        self.projection = Some((every.max(1), Box::new(project)));
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.s0.is_finite() && self.s1.is_finite()) || self.s0 == self.s1 {
            return Err(Error::domain("integration interval must be finite and non-empty"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::domain("tolerance must be positive"));
        }
        if !(self.max_step > 0.0) {
            return Err(Error::domain("max_step must be positive"));
        }
        if self.y0.len() != self.dimension || self.dimension == 0 {
            return Err(Error::domain("initial state length does not match dimension"));
        }
        if self.y0.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("initial state is not finite"));
        }
        Ok(())
    }
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// Integrates `p` and returns the solution at the requested outputs.
///
/// Each step's local error estimate is held below `tolerance · h / |s1 - s0|`
/// in the mixed norm `|e_i| / (tol + tol max(|y_i|, |y_new_i|))`, so the
/// per-step error never exceeds `tolerance` and the accumulated error stays
/// proportional to it. Outputs between steps come from the pair's
/// fourth-order continuous extension.
pub fn integrate_ivp(p: &IvpProblem<'_>) -> Result<SampledPath> {
    p.validate()?;
    let n = p.dimension;
    let dir = (p.s1 - p.s0).signum();
    let span = (p.s1 - p.s0).abs();
    let tol = p.tolerance;

    let outputs: Vec<f64> = match &p.outputs {
        Some(o) => {
            let lo = p.s0.min(p.s1);
            let hi = p.s0.max(p.s1);
            if o.iter().any(|&s| !(s >= lo - 1e-12 * span && s <= hi + 1e-12 * span)) {
                return Err(Error::domain("output param outside the integration interval"));
            }
            let mut o = o.clone();
            o.sort_by(|a, b| (dir * a).total_cmp(&(dir * b)));
            o.dedup();
            o
        }
        None => Vec::new(),
    };
    let every_step = p.outputs.is_none();
    let mut next_out = 0usize;

    let mut params = Vec::new();
    let mut states = Vec::new();

    let mut s = p.s0;
    let mut y = p.y0.clone();
    let mut k: [Vec<f64>; 7] = std::array::from_fn(|_| vec![0.0; n]);
    let mut tmp = vec![0.0; n];
    let mut y_new = vec![0.0; n];
    (p.rhs)(s, &y, &mut k[0]);
    check_finite(&k[0], s)?;

    if every_step {
        params.push(s);
        states.push(y.clone());
    } else {
        while next_out < outputs.len() && (outputs[next_out] - s).abs() <= 1e-14 * span.max(1.0) {
            params.push(outputs[next_out]);
            states.push(y.clone());
            next_out += 1;
        }
    }

    let mut h = initial_step(&y, &k[0], tol).min(p.max_step).min(span);
    let mut accepted = 0usize;
    let mut steps = 0usize;
    let mut cont: [Vec<f64>; 5] = std::array::from_fn(|_| vec![0.0; n]);

    loop {
        let remaining = (p.s1 - s) * dir;
        if remaining <= 1e-14 * span.max(1.0) {
            break;
        }
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::Integration {
                s,
                reason: "step budget exhausted".into(),
            });
        }
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        if h < 1e-14 * s.abs().max(1.0) {
            return Err(Error::Integration {
                s,
                reason: format!("step size underflow (h = {h:e})"),
            });
        }
        let hs = dir * h;

        for stage in 1..7 {
            for i in 0..n {
                let mut acc = y[i];
                for (j, kj) in k.iter().enumerate().take(stage) {
                    acc += hs * A[stage][j] * kj[i];
                }
                tmp[i] = acc;
            }
            let (before, after) = k.split_at_mut(stage);
            let _ = before;
            (p.rhs)(s + C[stage] * hs, &tmp, &mut after[0]);
            if stage == 6 {
                y_new.copy_from_slice(&tmp);
            }
        }

        let mut err = 0.0;
        for i in 0..n {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                e += E[j] * kj[i];
            }
            let sc = tol + tol * y[i].abs().max(y_new[i].abs());
            err += (hs * e / sc).powi(2);
        }
        // Error per unit step: the estimate is charged against the share
        // `h / span` of the tolerance, so the global error tracks `tol`.
        let err = (err / n as f64).sqrt() * span / h;

        if !err.is_finite() {
            h *= 0.2;
            continue;
        }

        if err <= 1.0 {
            for i in 0..n {
                let ydiff = y_new[i] - y[i];
                let bspl = hs * k[0][i] - ydiff;
                cont[0][i] = y[i];
                cont[1][i] = ydiff;
                cont[2][i] = bspl;
                cont[3][i] = ydiff - hs * k[6][i] - bspl;
                let mut d = 0.0;
                for (j, kj) in k.iter().enumerate() {
                    d += D[j] * kj[i];
                }
                cont[4][i] = hs * d;
            }
            let s_new = if last { p.s1 } else { s + hs };

            if !every_step {
                while next_out < outputs.len() && (outputs[next_out] - s_new) * dir <= 1e-14 * span.max(1.0) {
                    let theta = ((outputs[next_out] - s) / hs).clamp(0.0, 1.0);
                    let th1 = 1.0 - theta;
                    let v: Vec<f64> = (0..n)
                        .map(|i| {
                            cont[0][i]
                                + theta
                                    * (cont[1][i]
                                        + th1 * (cont[2][i] + theta * (cont[3][i] + th1 * cont[4][i])))
                        })
                        .collect();
                    params.push(outputs[next_out]);
                    states.push(v);
                    next_out += 1;
                }
            }

            s = s_new;
            std::mem::swap(&mut y, &mut y_new);
            accepted += 1;
            let mut projected = false;
            if let Some((every, project)) = &p.projection {
                if accepted.is_multiple_of(*every) {
                    project(&mut y);
                    projected = true;
                }
            }
            if projected {
                (p.rhs)(s, &y, &mut k[0]);
            } else {
                let (first, rest) = k.split_at_mut(1);
                first[0].copy_from_slice(&rest[5]);
            }
            check_finite(&k[0], s)?;
            if every_step {
                params.push(s);
                states.push(y.clone());
            }
            let fac = (0.9 * err.max(1e-10).powf(-0.25)).clamp(0.2, 10.0);
            h = (h * fac).min(p.max_step);
        } else {
            let fac = (0.9 * err.powf(-0.25)).clamp(0.2, 1.0);
            h *= fac;
        }
    }

    // Outputs that coincide with the end point within rounding.
    while next_out < outputs.len() {
        params.push(outputs[next_out]);
        states.push(y.clone());
        next_out += 1;
    }

    if dir < 0.0 {
        params.reverse();
        states.reverse();
    }
    SampledPath::new(params, states)
}

fn check_finite(v: &[f64], s: f64) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::Integration {
            s,
            reason: "right-hand side is not finite".into(),
        })
    }
}

fn initial_step(y: &[f64], f0: &[f64], tol: f64) -> f64 {
    let n = y.len() as f64;
    let sc = |v: f64| tol + tol * v.abs();
    let d0 = (y.iter().map(|v| (v / sc(*v)).powi(2)).sum::<f64>() / n).sqrt();
    let d1 = (y
        .iter()
        .zip(f0)
        .map(|(v, f)| (f / sc(*v)).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        (0.01 * d0 / d1).max(1e-6)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E as EULER, PI};

    #[test]
    fn constant_solution() {
        let p = IvpProblem::new(|_, _, dy: &mut [f64]| dy.fill(0.0), 0.0, 3.0, vec![1.5, -2.0]);
        let out = integrate_ivp(&p).unwrap();
        for y in out.states() {
            assert_eq!(y, &vec![1.5, -2.0]);
        }
    }

    #[test]
    fn exponential_growth() {
        let p = IvpProblem::new(|_, y: &[f64], dy: &mut [f64]| dy[0] = y[0], 0.0, 1.0, vec![1.0]);
        let out = integrate_ivp(&p).unwrap();
        let (s, y) = out.last().unwrap();
        assert_eq!(s, 1.0);
        assert!((y[0] - EULER).abs() < 10.0 * p.tolerance, "{}", y[0] - EULER);
    }

    fn oscillator(tol: f64, max_step: f64) -> f64 {
        let p = IvpProblem::new(
            |_, y: &[f64], dy: &mut [f64]| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            0.0,
            2.0 * PI,
            vec![1.0, 0.0],
        )
        .tolerance(tol)
        .max_step(max_step);
        let out = integrate_ivp(&p).unwrap();
        let (_, y) = out.last().unwrap();
        ((y[0] - 1.0).powi(2) + y[1].powi(2)).sqrt()
    }

    #[test]
    fn harmonic_oscillator_returns_home() {
        let tol = DEFAULT_TOLERANCE;
        let err = oscillator(tol, 0.01 * 2.0 * PI);
        assert!(err < 100.0 * tol, "{err}");
    }

    #[test]
    fn halving_tolerance_halves_error() {
        for tol in [1e-5, 1e-6, 1e-7, 1e-8] {
            let e1 = oscillator(tol, 10.0);
            let e2 = oscillator(tol / 2.0, 10.0);
            assert!(e2 <= e1 / 2.0, "tol {tol}: {e1:e} -> {e2:e}");
        }
    }

    #[test]
    fn dense_outputs_match_exact_solution() {
        let outs: Vec<f64> = (0..=40).map(|i| i as f64 * 0.05).collect();
        let p = IvpProblem::new(
            |_, y: &[f64], dy: &mut [f64]| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            0.0,
            2.0,
            vec![0.0, 1.0],
        )
        .max_step(0.5)
        .outputs(outs.clone());
        let out = integrate_ivp(&p).unwrap();
        assert_eq!(out.params(), outs.as_slice());
        for (s, y) in out.params().iter().zip(out.states()) {
            assert!((y[0] - s.sin()).abs() < 1e-8, "s={s}");
        }
    }

    #[test]
    fn backward_integration_is_sorted() {
        let p = IvpProblem::new(|_, y: &[f64], dy: &mut [f64]| dy[0] = y[0], 1.0, 0.0, vec![EULER])
            .outputs(vec![0.0, 0.5, 1.0]);
        let out = integrate_ivp(&p).unwrap();
        assert_eq!(out.params(), &[0.0, 0.5, 1.0]);
        assert!((out.states()[0][0] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn blow_up_reports_last_good_param() {
        // y' = y², y(0) = 1 blows up at s = 1.
        let p = IvpProblem::new(|_, y: &[f64], dy: &mut [f64]| dy[0] = y[0] * y[0], 0.0, 2.0, vec![1.0]);
        match integrate_ivp(&p) {
            Err(Error::Integration { s, .. }) => assert!(s > 0.9 && s <= 1.0, "{s}"),
            other => panic!("expected integration error, got {other:?}"),
        }
    }

    #[test]
    fn projection_hook_runs() {
        use std::cell::Cell;
        let calls = Cell::new(0);
        let p = IvpProblem::new(|_, _, dy: &mut [f64]| dy[0] = 1.0, 0.0, 1.0, vec![0.0])
            .max_step(0.001)
            .project_every(50, |_| calls.set(calls.get() + 1));
        integrate_ivp(&p).unwrap();
        assert!(calls.get() >= 19, "{}", calls.get());
    }

    #[test]
    fn rejects_bad_problems() {
        let p = IvpProblem::new(|_, _, _: &mut [f64]| {}, 1.0, 1.0, vec![0.0]);
        assert!(integrate_ivp(&p).is_err());
        let p = IvpProblem::new(|_, _, _: &mut [f64]| {}, 0.0, 1.0, vec![0.0]).tolerance(0.0);
        assert!(integrate_ivp(&p).is_err());
        assert!(SampledPath::new(vec![0.0, 0.0], vec![vec![1.0], vec![1.0]]).is_err());
    }
}
