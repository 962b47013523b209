//! Shooting along the unstable curve and backward classification of Cauchy data.

use serde::Serialize;

use super::{field, rescaled_field, time_scale, E2Error, E2State, EpsilonProfile, T_INDEX};
use crate::numerics::{linear_fit, solve_ivp, Event, IvpError, IvpSolver, Monitor, Termination, Trajectory};

/// The trichotomy for solutions of the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    /// `c² < a²`: `a` blows up backward.
    #[serde(rename = "case1")]
    Case1,
    /// `c² − a² > 2a²(b² + ε)`: `c` blows up backward.
    #[serde(rename = "case2")]
    Case2,
    /// In between: the solution leaves an equilibrium `(q, 0, q)`.
    #[serde(rename = "case3-unstable-curve")]
    Case3UnstableCurve,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Case1 => "case1",
            Classification::Case2 => "case2",
            Classification::Case3UnstableCurve => "case3-unstable-curve",
        }
    }

    /// Prediction from the sign data at one point; `tol` is relative to `a²`.
    pub fn predict(a: f64, b: f64, c: f64, eps: &EpsilonProfile, tol: f64) -> Self {
        let gap = c * c - a * a;
        let upper = 2.0 * a * a * (b * b + eps.eval(b));
        if gap < -tol * a * a {
            Classification::Case1
        } else if gap > upper + tol * a * a {
            Classification::Case2
        } else {
            Classification::Case3UnstableCurve
        }
    }
}

/// Backward blow-up `var ≃ C (t − ξ)^p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowUp {
    pub variable: &'static str,
    pub xi: f64,
    /// From a log-log fit of `var` against `t − ξ`.
    pub exponent: f64,
    /// From the slope of `var/var′` against `t`, which is `1/p`.
    pub exponent_from_ratio: f64,
    pub fit_points: usize,
}

/// Monitor indices logged along forward runs.
pub mod monitors {
    pub const AB: usize = 0;
    pub const BC: usize = 1;
    pub const AC: usize = 2;
    pub const A_OVER_B: usize = 3;
    pub const GAP: usize = 4;
    pub const REGION: usize = 5;
    pub const RATIO_BOUNDS: usize = 6;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootSettings {
    /// Offset `δ`: the run starts at `(q, δq, q)`.
    pub delta: f64,
    pub b_max: f64,
    pub region_tol: f64,
    pub solver: IvpSolver,
}

impl Default for ShootSettings {
    fn default() -> Self {
        ShootSettings {
            delta: 1e-8,
            b_max: 1e3,
            region_tol: 1e-8,
            solver: IvpSolver { abs_tol: 1e-16, rel_tol: 1e-11, ..Default::default() },
        }
    }
}

/// An integrated solution with state `[a, b, c, f, r, t]` in the parameter
/// `σ` of [`time_scale`]; `t` is the last component.
#[derive(Debug, Clone, Serialize)]
pub struct E2Trajectory {
    /// Equilibrium the curve leaves (case 3 only).
    pub q: Option<f64>,
    pub eps: EpsilonProfile,
    pub classification: Classification,
    /// What the sign data at the first point alone say. Cases 1 and 2 are
    /// backward invariant, so they are final; a point inside the region can
    /// still leave it backward, so `Case3UnstableCurve` here is only a
    /// necessary condition.
    pub predicted: Classification,
    pub blow_up: Option<BlowUp>,
    #[serde(skip)]
    pub trajectory: Trajectory,
}

fn rel(lhs: f64, rhs: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        0.0
    } else {
        (lhs - rhs).abs() / scale
    }
}

/// Relative residuals of the five product identities at one state.
///
/// Each residual is scaled by the magnitudes of its products before
/// cancellation (`a²+c²` in place of `c²−a²` inside the field), so near an
/// equilibrium, where `c − a` is a few ulps, roundoff does not pass for a
/// violated identity.
pub fn lemma_residuals(y: &[f64], eps: &EpsilonProfile) -> [f64; 5] {
    let mut d = [0.0; 4];
    field(eps, &y[..4], &mut d);
    let (a, b, c) = (y[0], y[1], y[2]);
    let (da, db, dc) = (d[0], d[1], d[2]);
    let e = eps.eval(b);
    let (a2, b2, c2) = (a * a, b * b, c * c);
    // Uncancelled sizes of a′, b′, c′.
    let (ma, mb, mc) =
        (0.5 * a * (a2 + c2), 0.5 * b * (a2 + c2), 0.5 * c * (a2 + c2 + 2.0 * a2 * b2 + 2.0 * e.abs() * a2));
    let ab_r = a * b * c2;
    let bc_r = b * c * a2 * (1.0 + b2 + e);
    let ac_r = a2 * a * c * (b2 + e);
    let aob_r = -a2 * a / b;
    let gap_r = -(c2 * c2 - a2 * a2) + 2.0 * a2 * c2 * (b2 + e);
    let gap_m = c2 * c2 + a2 * a2 + 2.0 * a2 * c2 * (b2 + e.abs());
    [
        rel(da * b + a * db, ab_r, ma * b + a * mb + ab_r.abs()),
        rel(db * c + b * dc, bc_r, mb * c + b * mc + bc_r.abs()),
        rel(da * c + a * dc, ac_r, ma * c + a * mc + ac_r.abs()),
        rel((da * b - a * db) / b2, aob_r, (ma * b + a * mb) / b2 + aob_r.abs()),
        rel(2.0 * c * dc - 2.0 * a * da, gap_r, 2.0 * c * mc + 2.0 * a * ma + gap_m),
    ]
}

/// Violation of `0 ≤ c² − a² ≤ 2a²(b² + ε)`, relative to `a² + c²`.
pub fn region_violation(y: &[f64], eps: &EpsilonProfile) -> f64 {
    let (a, b, c) = (y[0], y[1], y[2]);
    let gap = c * c - a * a;
    let upper = 2.0 * a * a * (b * b + eps.eval(b));
    (-gap).max(gap - upper).max(0.0) / (a * a + c * c)
}

/// Violation of `1/√(1 + b² + ε) ≤ a/c ≤ 1`.
pub fn ratio_violation(y: &[f64], eps: &EpsilonProfile) -> f64 {
    let (a, b, c) = (y[0], y[1], y[2]);
    let x = a / c;
    let lo = 1.0 / (1.0 + b * b + eps.eval(b)).sqrt();
    (x - 1.0).max(lo - x).max(0.0)
}

fn forward_monitors(eps: &EpsilonProfile) -> Vec<Monitor<'_>> {
    let mut m: Vec<Monitor<'_>> =
        (0..5).map(|k| Box::new(move |_t: f64, y: &[f64]| lemma_residuals(y, eps)[k]) as Monitor<'_>).collect();
    m.push(Box::new(move |_t, y| region_violation(y, eps)));
    m.push(Box::new(move |_t, y| ratio_violation(y, eps)));
    m
}

/// Integrates the unstable curve of `(q, 0, q)` forward from `(q, δq, q)`
/// until `b = b_max`.
///
/// The unstable eigenvector of the linearization is the `b`-axis, so a pure
/// `b` offset stays off the line of equilibria. The arc length `r` starts at
/// `b₀`, its leading-order value along the curve.
pub fn shoot_unstable(q: f64, eps: &EpsilonProfile, settings: &ShootSettings) -> Result<E2Trajectory, E2Error> {
    if !(settings.delta > 0.0 && settings.delta <= 1e-4) {
        return Err(E2Error::BadDelta(settings.delta));
    }
    if !(q > 0.0) {
        return Err(E2Error::NonPositive(q, settings.delta * q, q));
    }
    eps.check(settings.b_max)?;
    let b0 = settings.delta * q;
    let y0 = [q, b0, q, 0.0, b0, 0.0];
    let b_max = settings.b_max;
    let horizon = ((1.0 / settings.delta).ln() + 200.0) / (q * q);
    let events: Vec<Event<'_>> =
        vec![Box::new(move |_s, y: &[f64]| y[1] - b_max), Box::new(move |_s, y: &[f64]| y[T_INDEX] - horizon)];
    let f = |_s: f64, y: &[f64], dy: &mut [f64]| rescaled_field(eps, y, dy);
    let sigma_end = horizon * time_scale(&y0) * 1e6;
    let traj = solve_ivp(f, &y0, 0.0, sigma_end, &settings.solver, &forward_monitors(eps), &events)?;
    if traj.termination != (Termination::Event { index: 0 }) {
        return Err(E2Error::Stalled { t: traj.last().state[T_INDEX] });
    }
    if let Some(r) =
        traj.monitor_log.iter().filter(|r| r.monitor == monitors::REGION).find(|r| r.residual > settings.region_tol)
    {
        let t = traj.interpolate(r.t)[T_INDEX];
        return Err(E2Error::RegionViolation { t, value: r.residual });
    }
    Ok(E2Trajectory {
        q: Some(q),
        eps: eps.clone(),
        classification: Classification::Case3UnstableCurve,
        predicted: Classification::Case3UnstableCurve,
        blow_up: None,
        trajectory: traj,
    })
}

impl E2Trajectory {
    /// State at time `t`, if the run covered it.
    pub fn state(&self, t: f64) -> Option<E2State> {
        let (_, y) = self.at_component(T_INDEX, t)?;
        Some(E2State { a: y[0], b: y[1], c: y[2], f: y[3], t })
    }

    /// `(σ, state)` where component `k`, monotone along the run, first
    /// reaches `target`.
    fn at_component(&self, k: usize, target: f64) -> Option<(f64, Vec<f64>)> {
        let s = &self.trajectory.samples;
        let sign = if s.last()?.state[k] >= s[0].state[k] { 1.0 } else { -1.0 };
        let g = |y: &[f64]| sign * (y[k] - target);
        let idx = s.iter().position(|x| g(&x.state) >= 0.0)?;
        if idx == 0 {
            return (s[0].state[k] == target).then(|| (s[0].t, s[0].state.clone()));
        }
        let (mut lo, mut hi) = (s[idx - 1].t, s[idx].t);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if g(&self.trajectory.interpolate(mid)) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let m = 0.5 * (lo + hi);
        Some((m, self.trajectory.interpolate(m)))
    }

    /// `(σ, state)` where `b` first reaches `b`.
    pub fn at_b(&self, b: f64) -> Option<(f64, Vec<f64>)> {
        self.at_component(1, b)
    }

    /// `(σ, state)` at arc length `r` from the bolt.
    pub fn at_r(&self, r: f64) -> Option<(f64, Vec<f64>)> {
        self.at_component(4, r)
    }

    pub fn monitor_max(&self, monitor: usize) -> f64 {
        self.trajectory.monitor_max(monitor)
    }

    /// Whether the classification agrees with the sign data of `c² − a²`
    /// against `2a²(b² + ε)` at every sample: the region holds throughout for
    /// case 3, and for cases 1 and 2 the run, once in the corresponding
    /// half-space, never leaves it.
    pub fn sign_data_consistent(&self, tol: f64) -> bool {
        let eps = &self.eps;
        let class = |y: &[f64]| Classification::predict(y[0], y[1], y[2], eps, tol);
        let samples = &self.trajectory.samples;
        match self.classification {
            Classification::Case3UnstableCurve => {
                samples.iter().all(|s| class(&s.state) == Classification::Case3UnstableCurve)
            }
            c => match samples.iter().position(|s| class(&s.state) == c) {
                Some(i) => samples[i..].iter().all(|s| class(&s.state) == c),
                None => false,
            },
        }
    }

    /// Largest of the five identity residuals over all accepted steps.
    pub fn lemma_max(&self) -> f64 {
        (0..5).map(|k| self.monitor_max(k)).fold(0.0, f64::max)
    }
}

/// Backward integration of Cauchy data, classified by what happens as `t`
/// decreases: blow-up of `a` (case 1), of `c` (case 2), or convergence to an
/// equilibrium (case 3).
pub fn classify_cauchy(initial: &E2State, eps: &EpsilonProfile, solver: &IvpSolver) -> Result<E2Trajectory, E2Error> {
    let E2State { a, b, c, .. } = *initial;
    if !(a > 0.0 && b > 0.0 && c > 0.0) {
        return Err(E2Error::NonPositive(a, b, c));
    }
    let predicted = Classification::predict(a, b, c, eps, 1e-12);
    let blow = 1e8;
    let b_floor = 1e-3;
    let t0 = initial.t;
    let scale = (a * a).min(c * c).max(1e-6);
    let t1 = t0 - 200.0 / scale;
    let events: Vec<Event<'_>> = vec![
        Box::new(move |_s, y: &[f64]| blow - y[0].max(y[1]).max(y[2])),
        Box::new(move |_s, y: &[f64]| if (y[2] - y[0]).abs() < 1e-3 * (y[0] + y[2]) { y[1] - b_floor } else { 1.0 }),
        Box::new(move |_s, y: &[f64]| y[T_INDEX] - t1),
    ];
    let y0 = [a, b, c, initial.f, 0.0, t0];
    let f = |_s: f64, y: &[f64], dy: &mut [f64]| rescaled_field(eps, y, dy);
    let sigma_end = -(t0 - t1) * time_scale(&y0) * 1e6;
    let traj = match solve_ivp(f, &y0, 0.0, sigma_end, solver, &[], &events) {
        Ok(t) => t,
        Err(IvpError::StepUnderflow { partial, .. }) | Err(IvpError::NonFinite { partial, .. }) => {
            let big = partial.last().state[..3].iter().cloned().fold(0.0, f64::max);
            if big > 1e4 {
                *partial
            } else {
                return Err(E2Error::Stalled { t: partial.last().state[T_INDEX] });
            }
        }
        Err(e) => return Err(e.into()),
    };
    let end = traj.last().state.clone();
    let (classification, blow_up, q) =
        if end[1] <= b_floor * (1.0 + 1e-9) && (end[2] - end[0]).abs() < 1e-3 * (end[0] + end[2]) {
            (Classification::Case3UnstableCurve, None, Some(0.5 * (end[0] + end[2])))
        } else if end[0].max(end[2]) > 1e4 {
            let (k, name, class) =
                if end[0] >= end[2] { (0, "a", Classification::Case1) } else { (2, "c", Classification::Case2) };
            (class, fit_blow_up(&traj, k, name, eps), None)
        } else {
            return Err(E2Error::Ambiguous { t: end[T_INDEX] });
        };
    Ok(E2Trajectory { q, eps: eps.clone(), classification, predicted, blow_up, trajectory: traj })
}

/// Fits `var ≃ C(t − ξ)^p` over the accepted steps with `var ∈ [1e2, 1e4]`.
/// Closer to the blow-up the relative spacing of the steps approaches the
/// roundoff floor and the fit degrades.
fn fit_blow_up(traj: &Trajectory, k: usize, name: &'static str, eps: &EpsilonProfile) -> Option<BlowUp> {
    let pts: Vec<(f64, f64, f64)> = traj
        .samples
        .iter()
        .filter(|s| (1e2..=1e4).contains(&s.state[k]))
        .map(|s| {
            let mut d = [0.0; 5];
            field(eps, &s.state[..5], &mut d);
            (s.state[T_INDEX], s.state[k], d[k])
        })
        .collect();
    if pts.len() < 5 {
        return None;
    }
    let ts: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ratio: Vec<f64> = pts.iter().map(|p| p.1 / p.2).collect();
    let (slope, intercept) = linear_fit(&ts, &ratio)?;
    let xi = -intercept / slope;
    let lx: Vec<f64> = ts.iter().map(|t| (t - xi).abs().ln()).collect();
    let ly: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let (exponent, _) = linear_fit(&lx, &ly)?;
    Some(BlowUp { variable: name, xi, exponent, exponent_from_ratio: 1.0 / slope, fit_points: pts.len() })
}
