//! Dormand–Prince 5(4) integrator with PI step control, Hairer's dense output,
//! per-step monitors and terminal events.

use serde::Serialize;
use thiserror::Error;

/// Right-hand side `dy = field(t, y)`.
pub trait Field: Fn(f64, &[f64], &mut [f64]) {}
impl<T: Fn(f64, &[f64], &mut [f64])> Field for T {}

/// A scalar evaluated at each accepted step and logged.
pub type Monitor<'a> = Box<dyn Fn(f64, &[f64]) -> f64 + 'a>;

/// A scalar whose sign change stops the integration; the crossing is located
/// on the dense output.
pub type Event<'a> = Box<dyn Fn(f64, &[f64]) -> f64 + 'a>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IvpSolver {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_step: f64,
    /// Spacing used by [`Trajectory::resample`].
    pub dense_stride: f64,
    /// Smallest admissible step, relative to `max(1, |t|)`.
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for IvpSolver {
    fn default() -> Self {
        IvpSolver {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            max_step: f64::INFINITY,
            dense_stride: 0.1,
            min_step: 1e-14,
            max_steps: 2_000_000,
        }
    }
}

impl IvpSolver {
    pub fn with_tolerance(tol: f64) -> Self {
        IvpSolver { abs_tol: tol, rel_tol: tol, ..Default::default() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Sample {
    pub t: f64,
    pub state: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MonitorRecord {
    pub t: f64,
    pub monitor: usize,
    pub residual: f64,
}

/// Hermite-style continuous extension of one accepted step.
#[derive(Debug, Clone)]
struct DenseStep {
    t0: f64,
    h: f64,
    r: [Vec<f64>; 5],
}

impl DenseStep {
    fn eval(&self, t: f64, out: &mut [f64]) {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.r[0][i] + th * (self.r[1][i] + th1 * (self.r[2][i] + th * (self.r[3][i] + th1 * self.r[4][i])));
        }
    }
}

/// Why an integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    ReachedEnd,
    Event { index: usize },
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub monitor_log: Vec<MonitorRecord>,
    pub termination: Termination,
    pub dense_stride: f64,
    dense: Vec<DenseStep>,
}

impl Trajectory {
    pub fn t_start(&self) -> f64 {
        self.samples[0].t
    }
    pub fn t_end(&self) -> f64 {
        self.samples.last().expect("non-empty").t
    }
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("non-empty")
    }
    fn forward(&self) -> bool {
        self.t_end() >= self.t_start()
    }

    /// Dense-output value at `t`, clamped to the integrated range.
    pub fn interpolate(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.samples[0].state.len()];
        if self.dense.is_empty() {
            out.copy_from_slice(&self.samples[0].state);
            return out;
        }
        let fwd = self.forward();
        // Steps are ordered along the direction of integration.
        let idx = self.dense.partition_point(|d| {
            let end = d.t0 + d.h;
            if fwd {
                end < t
            } else {
                end > t
            }
        });
        let step = &self.dense[idx.min(self.dense.len() - 1)];
        let (a, b) = if fwd { (step.t0, step.t0 + step.h) } else { (step.t0 + step.h, step.t0) };
        step.eval(t.clamp(a, b), &mut out);
        out
    }

    /// Samples at multiples of `dense_stride` from the dense output.
    pub fn resample(&self) -> Vec<Sample> {
        let (t0, t1) = (self.t_start(), self.t_end());
        let span = (t1 - t0).abs();
        let count = (span / self.dense_stride).floor() as usize;
        let dir = (t1 - t0).signum();
        let mut out: Vec<Sample> = (0..=count)
            .map(|k| {
                let t = t0 + dir * k as f64 * self.dense_stride;
                Sample { t, state: self.interpolate(t) }
            })
            .collect();
        if out.last().map(|s| s.t != t1).unwrap_or(true) {
            out.push(self.last().clone());
        }
        out
    }

    /// Largest logged residual of one monitor.
    pub fn monitor_max(&self, monitor: usize) -> f64 {
        self.monitor_log.iter().filter(|r| r.monitor == monitor).map(|r| r.residual).fold(0.0, f64::max)
    }
}

#[derive(Debug, Error, Clone)]
pub enum IvpError {
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64, state: Vec<f64>, partial: Box<Trajectory> },
    #[error("field returned a non-finite value at t = {t}")]
    NonFinite { t: f64, state: Vec<f64>, partial: Box<Trajectory> },
    #[error("step budget of {0} exhausted")]
    TooManySteps(usize, Box<Trajectory>),
    #[error("invalid problem: {0}")]
    Invalid(&'static str),
}

impl IvpError {
    /// The trajectory up to the failure, when there is one.
    pub fn partial(&self) -> Option<&Trajectory> {
        match self {
            IvpError::StepUnderflow { partial, .. } | IvpError::NonFinite { partial, .. } => Some(partial),
            IvpError::TooManySteps(_, p) => Some(p),
            IvpError::Invalid(_) => None,
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

fn finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// Integrates `field` from `(t0, y0)` to `t1` (either direction).
///
/// Monitors are evaluated at the initial point and at every accepted step.
/// The first event whose sign changes across a step terminates the run at the
/// located crossing.
pub fn solve_ivp<F: Field>(
    field: F,
    y0: &[f64],
    t0: f64,
    t1: f64,
    s: &IvpSolver,
    monitors: &[Monitor<'_>],
    events: &[Event<'_>],
) -> Result<Trajectory, IvpError> {
    if t0 == t1 {
        return Err(IvpError::Invalid("t0 must differ from t1"));
    }
    if !(s.abs_tol > 0.0 && s.rel_tol > 0.0 && s.max_step > 0.0 && s.dense_stride > 0.0) {
        return Err(IvpError::Invalid("tolerances, max_step and dense_stride must be positive"));
    }
    let dim = y0.len();
    let dir = (t1 - t0).signum();
    let mut traj = Trajectory {
        samples: vec![Sample { t: t0, state: y0.to_vec() }],
        monitor_log: Vec::new(),
        termination: Termination::ReachedEnd,
        dense_stride: s.dense_stride,
        dense: Vec::new(),
    };
    for (i, m) in monitors.iter().enumerate() {
        traj.monitor_log.push(MonitorRecord { t: t0, monitor: i, residual: m(t0, y0) });
    }
    let mut k1 = vec![0.0; dim];
    field(t0, y0, &mut k1);
    if !finite(&k1) {
        return Err(IvpError::NonFinite { t: t0, state: y0.to_vec(), partial: Box::new(traj) });
    }

    let sk = |a: f64, b: f64| s.abs_tol + s.rel_tol * a.abs().max(b.abs());

    // Initial step guess (Hairer & Wanner, II.4).
    let mut h = {
        let d0 = (y0.iter().map(|y| (y / sk(*y, *y)).powi(2)).sum::<f64>() / dim as f64).sqrt();
        let d1 = (k1.iter().zip(y0).map(|(k, y)| (k / sk(*y, *y)).powi(2)).sum::<f64>() / dim as f64).sqrt();
        let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        h0 = h0.min(s.max_step).min((t1 - t0).abs());
        let y1: Vec<f64> = y0.iter().zip(&k1).map(|(y, k)| y + dir * h0 * k).collect();
        let mut f1 = vec![0.0; dim];
        field(t0 + dir * h0, &y1, &mut f1);
        let d2 = (f1.iter().zip(&k1).zip(y0).map(|((a, b), y)| ((a - b) / sk(*y, *y)).powi(2)).sum::<f64>()
            / dim as f64)
            .sqrt()
            / h0;
        let h1 = if d1.max(d2) <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(0.2) };
        (100.0 * h0).min(h1).min(s.max_step).min((t1 - t0).abs())
    };

    let (mut t, mut y) = (t0, y0.to_vec());
    let mut fac_old: f64 = 1e-4;
    let mut last_rejected = false;
    let (mut k2, mut k3, mut k4, mut k5, mut k6, mut k7) =
        (vec![0.0; dim], vec![0.0; dim], vec![0.0; dim], vec![0.0; dim], vec![0.0; dim], vec![0.0; dim]);
    let mut ys = vec![0.0; dim];
    let mut y_new = vec![0.0; dim];
    let mut steps = 0usize;
    let mut event_vals: Vec<f64> = events.iter().map(|e| e(t0, y0)).collect();

    loop {
        if (t1 - t) * dir <= 0.0 {
            return Ok(traj);
        }
        steps += 1;
        if steps > s.max_steps {
            return Err(IvpError::TooManySteps(s.max_steps, Box::new(traj)));
        }
        let min_h = s.min_step * t.abs().max(1.0);
        if h < min_h {
            return Err(IvpError::StepUnderflow { t, state: y.clone(), partial: Box::new(traj) });
        }
        let last_step = (t + dir * h - t1) * dir >= 0.0;
        if last_step {
            h = (t1 - t).abs();
        }
        let hs = dir * h;

        for i in 0..dim {
            ys[i] = y[i] + hs * A21 * k1[i];
        }
        field(t + C2 * hs, &ys, &mut k2);
        for i in 0..dim {
            ys[i] = y[i] + hs * (A31 * k1[i] + A32 * k2[i]);
        }
        field(t + C3 * hs, &ys, &mut k3);
        for i in 0..dim {
            ys[i] = y[i] + hs * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        field(t + C4 * hs, &ys, &mut k4);
        for i in 0..dim {
            ys[i] = y[i] + hs * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        field(t + C5 * hs, &ys, &mut k5);
        for i in 0..dim {
            ys[i] = y[i] + hs * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        field(t + hs, &ys, &mut k6);
        for i in 0..dim {
            y_new[i] = y[i] + hs * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        field(t + hs, &y_new, &mut k7);

        let stages_finite = finite(&y_new) && finite(&k7) && finite(&k2) && finite(&k6);
        let err = if stages_finite {
            let mut acc = 0.0;
            for i in 0..dim {
                let e = hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                acc += (e / sk(y[i], y_new[i])).powi(2);
            }
            (acc / dim as f64).sqrt()
        } else {
            f64::INFINITY
        };

        if err <= 1.0 {
            // PI controller, beta = 0.04.
            let fac11 = err.powf(0.2 - 0.04 * 0.75);
            let mut fac = fac11 / fac_old.powf(0.04) / 0.9;
            fac = fac.clamp(0.2, 10.0);
            fac_old = err.max(1e-4);
            let mut h_new = (h / fac).min(s.max_step);
            if last_rejected {
                h_new = h_new.min(h);
            }
            last_rejected = false;

            let mut r = [vec![0.0; dim], vec![0.0; dim], vec![0.0; dim], vec![0.0; dim], vec![0.0; dim]];
            for i in 0..dim {
                let ydiff = y_new[i] - y[i];
                let bspl = hs * k1[i] - ydiff;
                r[0][i] = y[i];
                r[1][i] = ydiff;
                r[2][i] = bspl;
                r[3][i] = ydiff - hs * k7[i] - bspl;
                r[4][i] = hs * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            let step = DenseStep { t0: t, h: hs, r };
            let t_new = t + hs;

            // Terminal events.
            let mut hit: Option<(usize, f64)> = None;
            let mut new_vals = Vec::with_capacity(events.len());
            for (i, e) in events.iter().enumerate() {
                let v = e(t_new, &y_new);
                new_vals.push(v);
                let old = event_vals[i];
                if old != 0.0 && (old.signum() != v.signum() || v == 0.0) {
                    let mut buf = vec![0.0; dim];
                    let (mut lo, mut hi, mut flo) = (t, t_new, old);
                    for _ in 0..200 {
                        let mid = 0.5 * (lo + hi);
                        if mid == lo || mid == hi {
                            break;
                        }
                        step.eval(mid, &mut buf);
                        let fm = e(mid, &buf);
                        if fm == 0.0 {
                            hi = mid;
                            break;
                        }
                        if fm.signum() == flo.signum() {
                            lo = mid;
                            flo = fm;
                        } else {
                            hi = mid;
                        }
                    }
                    let tc = hi;
                    let earlier = match hit {
                        None => true,
                        Some((_, prev)) => (tc - prev) * dir < 0.0,
                    };
                    if earlier {
                        hit = Some((i, tc));
                    }
                }
            }
            event_vals = new_vals;

            if let Some((index, tc)) = hit {
                let mut yc = vec![0.0; dim];
                step.eval(tc, &mut yc);
                let truncated = DenseStep { t0: t, h: hs, r: step.r.clone() };
                traj.dense.push(truncated);
                for (i, m) in monitors.iter().enumerate() {
                    traj.monitor_log.push(MonitorRecord { t: tc, monitor: i, residual: m(tc, &yc) });
                }
                traj.samples.push(Sample { t: tc, state: yc });
                traj.termination = Termination::Event { index };
                return Ok(traj);
            }

            traj.dense.push(step);
            t = if last_step { t1 } else { t_new };
            std::mem::swap(&mut y, &mut y_new);
            std::mem::swap(&mut k1, &mut k7);
            for (i, m) in monitors.iter().enumerate() {
                traj.monitor_log.push(MonitorRecord { t, monitor: i, residual: m(t, &y) });
            }
            traj.samples.push(Sample { t, state: y.clone() });
            h = h_new;
        } else {
            if !stages_finite && h <= min_h * 2.0 {
                return Err(IvpError::NonFinite { t, state: y.clone(), partial: Box::new(traj) });
            }
            let fac = if err.is_finite() { (err.powf(0.2 - 0.04 * 0.75) / 0.9).min(10.0) } else { 10.0 };
            h /= fac.max(1.0);
            last_rejected = true;
        }
    }
}
