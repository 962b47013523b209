//! Distances at both ends of an unstable curve, the bolt, and the skew-soliton
//! check through the generic frame engine.

use std::sync::Arc;

use serde::Serialize;

use super::shoot::{Classification, E2Trajectory};
use super::{field, frame_point, time_scale, E2Error, T_INDEX};
use crate::frame::{point_curvature, point_soliton, FrameStructure};
use crate::numerics::Quadrature;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceProfile {
    /// Length of the curve below `b = 1e−6`, i.e. toward `t = −∞`.
    pub tail_below: f64,
    /// `(b, r)` at `b = 1, 10, 100, 1000` where reached.
    pub r_at_decades: Vec<(f64, f64)>,
    /// Length from `b = 10` to `b = 100` from the integrated arc length.
    pub length_10_100: f64,
    /// The same length by quadrature of `2/(a/c + c/a) db`.
    pub length_10_100_quadrature: f64,
    /// `K₂ = min b·2m/(1+m²)` over `[10, 100]`, `m = 1/√(1+b²+ε)`.
    pub k2: f64,
    /// `K₂ ln 10`, the minorant for `length_10_100`.
    pub minorant: f64,
    /// First `b` with `a/c < 1 − 1e−6`.
    pub b_p: Option<f64>,
    /// `min b′/b³` over samples with `b > max(b_p, 1)`.
    pub k1: f64,
    /// Always "diverges" when the per-decade increments do not shrink.
    pub toward_eta: &'static str,
}

fn require_case3(t: &E2Trajectory) -> Result<(), E2Error> {
    if t.classification != Classification::Case3UnstableCurve || t.q.is_none() {
        return Err(E2Error::NotCase3);
    }
    Ok(())
}

pub fn distance_profile(t: &E2Trajectory) -> Result<DistanceProfile, E2Error> {
    require_case3(t)?;
    let eps = &t.eps;
    let tail_below = t.at_b(1e-6).map(|(_, y)| y[4]).unwrap_or(f64::NAN);
    let r_at_decades: Vec<(f64, f64)> =
        [1.0, 10.0, 100.0, 1000.0].iter().filter_map(|&b| t.at_b(b).map(|(_, y)| (b, y[4]))).collect();
    let r10 = t.at_b(10.0).map(|(_, y)| y[4]).unwrap_or(f64::NAN);
    let r100 = t.at_b(100.0).map(|(_, y)| y[4]).unwrap_or(f64::NAN);
    let integrand = |b: f64| match t.at_b(b) {
        Some((_, y)) => 2.0 / (y[0] / y[2] + y[2] / y[0]),
        None => f64::NAN,
    };
    let quad = Quadrature { abs_tol: 1e-9, rel_tol: 1e-9, max_subdivisions: 500 };
    let length_10_100_quadrature = quad.integrate(integrand, 10.0, 100.0).map(|r| r.value).unwrap_or(f64::NAN);
    let k2 = (0..=900)
        .map(|k| {
            let b = 10.0 + 0.1 * k as f64;
            let m = 1.0 / (1.0 + b * b + eps.eval(b)).sqrt();
            b * 2.0 * m / (1.0 + m * m)
        })
        .fold(f64::INFINITY, f64::min);
    let samples = &t.trajectory.samples;
    let b_p = samples.iter().find(|s| s.state[0] / s.state[2] < 1.0 - 1e-6).map(|s| s.state[1]);
    let floor = b_p.unwrap_or(f64::INFINITY).max(1.0);
    let k1 = samples
        .iter()
        .filter(|s| s.state[1] > floor)
        .map(|s| {
            let mut d = [0.0; 5];
            field(eps, &s.state[..5], &mut d);
            d[1] / s.state[1].powi(3)
        })
        .fold(f64::INFINITY, f64::min);
    let incs: Vec<f64> = r_at_decades.windows(2).map(|w| w[1].1 - w[0].1).collect();
    let shrinking = incs.windows(2).all(|w| w[1] < 0.5 * w[0]);
    Ok(DistanceProfile {
        tail_below,
        r_at_decades,
        length_10_100: r100 - r10,
        length_10_100_quadrature,
        k2,
        minorant: k2 * 10f64.ln(),
        b_p,
        k1,
        toward_eta: if shrinking || incs.len() < 2 { "undetermined" } else { "diverges" },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoltReport {
    /// `db/dr` at `r = 1e−4` from the field.
    pub db_dr: f64,
    /// The same by a secant on the trajectory.
    pub db_dr_secant: f64,
    /// `(r, d(a²+c²)/dr)` for `r = 1e−2, 1e−3, 1e−4`.
    pub even_slope: Vec<(f64, f64)>,
    /// `(r, (a²−c²)/r²)` for `r = 1e−2, 1e−3`.
    pub quadratic: Vec<(f64, f64)>,
    pub quadratic_rel_change: f64,
    /// `(r, (cr − ab)/r³)` on a log grid over `[1e−3, 1e−1]`.
    pub cubic: Vec<(f64, f64)>,
    /// `max |·| / min |·|` of the cubic ratios.
    pub cubic_spread: f64,
    /// Largest relative change of the cubic ratio across one decade of `r`.
    pub cubic_drift_per_decade: f64,
    pub pass: bool,
}

/// Limits at the bolt in the arc-length coordinate `r`.
pub fn bolt_smoothness(t: &E2Trajectory) -> Result<BoltReport, E2Error> {
    require_case3(t)?;
    let eps = &t.eps;
    let at = |r: f64| t.at_r(r).map(|(_, y)| y).ok_or(E2Error::NotCase3);
    let d_dr = |y: &[f64]| {
        let mut d = [0.0; 5];
        field(eps, &y[..5], &mut d);
        let rp = d[4];
        (d[1] / rp, (2.0 * y[0] * d[0] + 2.0 * y[2] * d[2]) / rp)
    };
    let y = at(1e-4)?;
    let (db_dr, _) = d_dr(&y);
    let h = 1e-6;
    let (yp, ym) = (at(1e-4 + h)?, at(1e-4 - h)?);
    let db_dr_secant = (yp[1] - ym[1]) / (yp[4] - ym[4]);
    let mut even_slope = Vec::new();
    for r in [1e-2, 1e-3, 1e-4] {
        even_slope.push((r, d_dr(&at(r)?).1));
    }
    let mut quadratic = Vec::new();
    for r in [1e-2, 1e-3] {
        let y = at(r)?;
        quadratic.push((r, (y[0] * y[0] - y[2] * y[2]) / (y[4] * y[4])));
    }
    let quadratic_rel_change = (quadratic[0].1 - quadratic[1].1).abs() / quadratic[1].1.abs();
    let mut cubic = Vec::new();
    for k in 0..=8 {
        let r = 1e-3 * 10f64.powf(k as f64 / 4.0);
        let y = at(r)?;
        cubic.push((r, (y[2] * y[4] - y[0] * y[1]) / y[4].powi(3)));
    }
    let mags: Vec<f64> = cubic.iter().map(|c| c.1.abs()).collect();
    let cubic_spread = mags.iter().cloned().fold(0.0, f64::max) / mags.iter().cloned().fold(f64::INFINITY, f64::min);
    let cubic_drift_per_decade = cubic
        .iter()
        .zip(cubic.iter().skip(4))
        .map(|(lo, hi)| {
            let d = (hi.1 / lo.1 - 1.0).abs();
            if d.is_finite() {
                d
            } else {
                f64::INFINITY
            }
        })
        .fold(0.0, f64::max);
    let even_ok = even_slope.iter().all(|(r, s)| (s / r).abs() < 10.0);
    let pass = (db_dr - 1.0).abs() < 1e-3
        && (db_dr_secant - 1.0).abs() < 1e-3
        && even_ok
        && quadratic_rel_change < 0.1
        && cubic_drift_per_decade < 0.1;
    Ok(BoltReport {
        db_dr,
        db_dr_secant,
        even_slope,
        quadratic,
        quadratic_rel_change,
        cubic,
        cubic_spread,
        cubic_drift_per_decade,
        pass,
    })
}

/// Frame residuals at one point of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualSample {
    pub t: f64,
    pub b: f64,
    pub skew: f64,
    pub identity3: f64,
    /// Ricci-form disagreement relative to `1 + |Scal|`.
    pub ricci_disagreement: f64,
}

/// Smallest `b` at which [`residual_samples`] evaluates the frame.
///
/// Toward the bolt the frame coefficients grow like `1/b` while the soliton
/// equations balance `O(1)` quantities, so the residual is roundoff of size
/// about `1e−16/b²`; the bolt itself is covered by [`bolt_smoothness`].
pub const RESIDUAL_B_MIN: f64 = 1e-3;

/// Residuals at `samples` points spaced evenly in `ln b` over
/// `[RESIDUAL_B_MIN, b_end]`.
pub fn residual_samples(t: &E2Trajectory, samples: usize) -> Result<Vec<ResidualSample>, E2Error> {
    let b_end = t.trajectory.last().state[1];
    if !(b_end > RESIDUAL_B_MIN) {
        return Err(E2Error::NotCase3);
    }
    let n = samples.max(1);
    let (l0, l1) = (RESIDUAL_B_MIN.ln(), b_end.ln());
    (0..n)
        .map(|k| {
            let b = (l0 + (l1 - l0) * (k as f64 + 0.5) / n as f64).exp();
            let (s, y) = t.at_b(b).ok_or(E2Error::NotCase3)?;
            let p = frame_point(s, &y, &t.eps);
            let r = point_soliton(&p)?;
            let (curv, _) = point_curvature(&p);
            Ok(ResidualSample {
                t: y[T_INDEX],
                b: y[1],
                skew: r.skew,
                identity3: r.identity3,
                ricci_disagreement: curv.ricci_disagreement / (1.0 + curv.scalar.abs()),
            })
        })
        .collect()
}

/// Largest skew-soliton residual (λ = −1) over [`residual_samples`].
pub fn skew_soliton_residual(t: &E2Trajectory, samples: usize) -> Result<f64, E2Error> {
    Ok(residual_samples(t, samples)?.iter().map(|r| r.skew).fold(0.0, f64::max))
}

impl E2Trajectory {
    /// The solution as a frame in the integration parameter `σ`, with
    /// `dσ/dτ = (dσ/dt)/(√2 abc)`.
    pub fn frame(&self) -> FrameStructure {
        let traj = Arc::new(self.trajectory.clone());
        let eps = Arc::new(self.eps.clone());
        let (tv, ev) = (traj.clone(), eps.clone());
        let values = Arc::new(move |s: f64| frame_point(s, &tv.interpolate(s), &ev).value);
        let (td, ed) = (traj.clone(), eps.clone());
        let derivs = Arc::new(move |s: f64| frame_point(s, &td.interpolate(s), &ed).deriv);
        let ds = Arc::new(move |s: f64| {
            let y = traj.interpolate(s);
            time_scale(&y) / (std::f64::consts::SQRT_2 * y[0] * y[1] * y[2])
        });
        FrameStructure::in_coordinate(1, -1.0, "sigma", values, Some(derivs), ds).with_label("e2")
    }
}
