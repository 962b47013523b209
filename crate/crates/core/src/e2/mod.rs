//! Gradient Kähler–Ricci skew-solitons of cohomogeneity one under `E(2)`.
//!
//! The metric `a²σ₁² + b²σ₂² + c²σ_z² + (abc)² dt²` with soliton potential `f`
//! satisfies
//!
//! ```text
//! 2a′/a = c² − a²
//! 2b′/b = a² + c²
//! 2c′/c = a² − c² + 2(ab)² + 2ε(b)a²
//! f′    = 2ε(b)a²
//! ```
//!
//! The only complete solutions leave an equilibrium `(q, 0, q)` along its
//! unstable curve and close up smoothly over a bolt at `b = 0`.

mod analysis;
mod shoot;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use analysis::{
    bolt_smoothness, distance_profile, residual_samples, skew_soliton_residual, BoltReport, DistanceProfile,
    ResidualSample, RESIDUAL_B_MIN,
};
pub use shoot::{
    classify_cauchy, lemma_residuals, monitors, ratio_violation, region_violation, shoot_unstable, BlowUp,
    Classification, E2Trajectory, ShootSettings,
};

use crate::frame::{Block, Coeffs, FrameError, FramePoint};
use crate::numerics::{Dual, IvpError};

#[derive(Debug, Error, Clone)]
pub enum E2Error {
    #[error("a, b, c must be positive, got ({0}, {1}, {2})")]
    NonPositive(f64, f64, f64),
    #[error("inadmissible epsilon profile: {0}")]
    Inadmissible(String),
    #[error("invariant region violated by {value:e} at t = {t}")]
    RegionViolation { t: f64, value: f64 },
    #[error("integration stopped at t = {t} before reaching b_max and without a blow-up signature")]
    Stalled { t: f64 },
    #[error("no classification signature within the integration window (ended at t = {t})")]
    Ambiguous { t: f64 },
    #[error("the trajectory is not a case-3 unstable curve")]
    NotCase3,
    #[error("shooting offset {0} must lie in (0, 1e-4]")]
    BadDelta(f64),
    #[error(transparent)]
    Ivp(#[from] IvpError),
    #[error(transparent)]
    Frame(#[from] FrameError),
}

/// The function `ε(b)` of the skew-soliton system.
///
/// Every variant is a function of `b²`, so evenness, `ε(0) = 0` for the named
/// profiles and `ε′(0) = 0` hold by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum EpsilonProfile {
    Zero,
    /// `b² e^{−b²}`
    QuadraticBump,
    /// `β b²`
    Poly {
        beta: f64,
    },
    /// `Σ c_k b^{2k}`
    Even {
        coefficients: Vec<f64>,
    },
}

/// Result of the admissibility checks on a sample grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Admissibility {
    pub vanishes_at_zero: bool,
    pub nonnegative: bool,
    pub slope_condition: bool,
    /// `min (ε′(b) + 2b)/(2b)` over the grid; small values mean the profile
    /// sits close to the boundary `ε′ = −2b`.
    pub slope_margin: f64,
    pub near_boundary: bool,
}

impl Admissibility {
    pub fn admissible(&self) -> bool {
        self.vanishes_at_zero && self.nonnegative && self.slope_condition
    }
}

impl EpsilonProfile {
    pub fn name(&self) -> String {
        match self {
            EpsilonProfile::Zero => "zero".into(),
            EpsilonProfile::QuadraticBump => "quadratic-bump".into(),
            EpsilonProfile::Poly { beta } => format!("poly({beta})"),
            EpsilonProfile::Even { coefficients } => format!("even{coefficients:?}"),
        }
    }

    /// Parses `zero`, `quadratic-bump`, `poly:β`, a JSON object, or a path to a
    /// JSON file.
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "zero" => return Ok(EpsilonProfile::Zero),
            "quadratic-bump" => return Ok(EpsilonProfile::QuadraticBump),
            _ => {}
        }
        if let Some(beta) = s.strip_prefix("poly:") {
            return beta.parse().map(|beta| EpsilonProfile::Poly { beta }).map_err(|e| format!("bad beta: {e}"));
        }
        let text = if s.trim_start().starts_with('{') {
            s.to_string()
        } else {
            std::fs::read_to_string(s).map_err(|e| format!("cannot read epsilon profile {s}: {e}"))?
        };
        serde_json::from_str(&text).map_err(|e| format!("bad epsilon profile: {e}"))
    }

    pub fn eval(&self, b: f64) -> f64 {
        let b2 = b * b;
        match self {
            EpsilonProfile::Zero => 0.0,
            EpsilonProfile::QuadraticBump => b2 * (-b2).exp(),
            EpsilonProfile::Poly { beta } => beta * b2,
            EpsilonProfile::Even { coefficients } => coefficients.iter().rev().fold(0.0, |acc, c| acc * b2 + c),
        }
    }

    pub fn deriv(&self, b: f64) -> f64 {
        let b2 = b * b;
        match self {
            EpsilonProfile::Zero => 0.0,
            EpsilonProfile::QuadraticBump => 2.0 * b * (-b2).exp() * (1.0 - b2),
            EpsilonProfile::Poly { beta } => 2.0 * beta * b,
            EpsilonProfile::Even { coefficients } => {
                let mut acc = 0.0;
                for (k, c) in coefficients.iter().enumerate().skip(1).rev() {
                    acc = acc * b2 + 2.0 * k as f64 * c;
                }
                acc * b
            }
        }
    }

    /// Checks `ε(0) = 0`, `ε ≥ 0` and `ε′(b) > −2b` on `(0, b_max]`.
    pub fn admissibility(&self, b_max: f64) -> Admissibility {
        let grid: Vec<f64> = (1..=4000).map(|k| b_max * (k as f64 / 4000.0).powi(2)).collect();
        let nonnegative = grid.iter().all(|&b| self.eval(b) >= 0.0);
        let margin = grid.iter().map(|&b| (self.deriv(b) + 2.0 * b) / (2.0 * b)).fold(f64::INFINITY, f64::min);
        Admissibility {
            vanishes_at_zero: self.eval(0.0) == 0.0,
            nonnegative,
            slope_condition: margin > 0.0,
            slope_margin: margin,
            near_boundary: margin < 0.05,
        }
    }

    pub fn check(&self, b_max: f64) -> Result<Admissibility, E2Error> {
        let a = self.admissibility(b_max);
        if !a.admissible() {
            return Err(E2Error::Inadmissible(format!("{}: {a:?}", self.name())));
        }
        Ok(a)
    }
}

/// Point of the `(a, b, c, f)` system at parameter `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct E2State {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    #[serde(default)]
    pub f: f64,
    #[serde(default)]
    pub t: f64,
}

/// Right-hand side for the state `[a, b, c, f, r]`, where `r′ = abc` is arc
/// length along the normal geodesic.
pub fn field(eps: &EpsilonProfile, y: &[f64], dy: &mut [f64]) {
    let (a, b, c) = (y[0], y[1], y[2]);
    let (a2, b2, c2) = (a * a, b * b, c * c);
    let e = eps.eval(b);
    dy[0] = 0.5 * a * (c2 - a2);
    dy[1] = 0.5 * b * (a2 + c2);
    dy[2] = 0.5 * c * (a2 - c2 + 2.0 * a2 * b2 + 2.0 * e * a2);
    dy[3] = 2.0 * e * a2;
    if dy.len() > 4 {
        dy[4] = a * b * c;
    }
}

/// `dσ/dt = 1 + a² + c² + a²b²`, the rate of the integration parameter.
///
/// Every logarithmic derivative of the system is `O(dσ/dt)`, so in `σ` the
/// finite-time blow-ups of `t` move to `σ = ±∞` and the steps stay well above
/// the spacing of doubles near the blow-up time.
pub fn time_scale(y: &[f64]) -> f64 {
    let (a2, b2, c2) = (y[0] * y[0], y[1] * y[1], y[2] * y[2]);
    1.0 + a2 + c2 + a2 * b2
}

/// Index of `t` in the integrated state `[a, b, c, f, r, t]`.
pub const T_INDEX: usize = 5;

/// [`field`] in the parameter `σ`, for the state `[a, b, c, f, r, t]`.
pub fn rescaled_field(eps: &EpsilonProfile, y: &[f64], dy: &mut [f64]) {
    field(eps, &y[..5], &mut dy[..5]);
    let w = 1.0 / time_scale(y);
    dy[..5].iter_mut().for_each(|v| *v *= w);
    dy[T_INDEX] = w;
}

/// `(a′, b′, c′, f′)`; fails for nonpositive `a, b, c`.
pub fn vector_field(s: &E2State, eps: &EpsilonProfile) -> Result<[f64; 4], E2Error> {
    if !(s.a > 0.0 && s.b >= 0.0 && s.c > 0.0) {
        return Err(E2Error::NonPositive(s.a, s.b, s.c));
    }
    let mut dy = [0.0; 4];
    field(eps, &[s.a, s.b, s.c, s.f], &mut dy);
    Ok(dy)
}

/// Analytic Jacobian of `(a′, b′, c′)` with respect to `(a, b, c)`.
pub fn jacobian(a: f64, b: f64, c: f64, eps: &EpsilonProfile) -> [[f64; 3]; 3] {
    let (a2, b2, c2) = (a * a, b * b, c * c);
    let e = eps.eval(b);
    let de = eps.deriv(b);
    [
        [0.5 * (c2 - 3.0 * a2), 0.0, a * c],
        [a * b, 0.5 * (a2 + c2), b * c],
        [
            c * a * (1.0 + 2.0 * b2 + 2.0 * e),
            c * a2 * (2.0 * b + de),
            0.5 * (a2 - 3.0 * c2 + 2.0 * a2 * b2 + 2.0 * e * a2),
        ],
    ]
}

/// Frame coefficients of the metric at `(a, b, c)` and their `τ`-derivatives.
///
/// `d/dτ = (1/(√2 abc)) d/dt`; derivatives are pushed through the field with
/// dual numbers. The potential is `f′(τ) = √2 ε a/(bc)`.
pub fn frame_point(t: f64, y: &[f64], eps: &EpsilonProfile) -> FramePoint {
    let mut dy = [0.0; 4];
    field(eps, &y[..4], &mut dy);
    let (a, b, c) = (Dual::new(y[0], dy[0]), Dual::new(y[1], dy[1]), Dual::new(y[2], dy[2]));
    let e = Dual::new(eps.eval(y[1]), eps.deriv(y[1]) * dy[1]);
    let s2 = std::f64::consts::SQRT_2;
    let abc = a * b * c;
    let den = abc * (2.0 * s2);
    let (a2, b2, c2) = (a * a, b * b, c * c);
    let ca = (c2 - a2) / den;
    let dd = -((a2 + c2) / den);
    let cc = a / (b * c * s2);
    let l = -((a2 - c2 + 2.0 * a2 * b2 + 2.0 * e * a2) / den);
    let n = -(c / (a * b * s2));
    let df = s2 * e * a / (b * c);
    let to_tau = 1.0 / (s2 * abc.re);
    let block = |pick: fn(Dual) -> f64, scale: f64| Block {
        a: pick(-ca) * scale,
        b: 0.0,
        c: pick(cc) * scale,
        d: pick(dd) * scale,
        e: pick(ca) * scale,
        f: 0.0,
        g: pick(cc) * scale,
        h: pick(-dd) * scale,
        n: pick(n) * scale,
    };
    let value = Coeffs { l: l.re, blocks: vec![block(|d| d.re, 1.0)], df: df.re };
    let deriv = Coeffs { l: l.du * to_tau, blocks: vec![block(|d| d.du, to_tau)], df: df.du * to_tau };
    FramePoint { s: t, lambda: -1.0, value, deriv, fd_derived: false }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::fd_jacobian;

    #[test]
    fn equilibrium_and_substitution() {
        let d =
            vector_field(&E2State { a: 1.0, b: 0.0, c: 1.0, f: 0.0, t: 0.0 }, &EpsilonProfile::QuadraticBump).unwrap();
        assert_eq!(d, [0.0; 4]);
        let d = vector_field(&E2State { a: 1.0, b: 1.0, c: 1.0, f: 0.0, t: 0.0 }, &EpsilonProfile::Zero).unwrap();
        assert_eq!(&d[..3], &[0.0, 1.0, 1.0]);
        assert!(vector_field(&E2State { a: -1.0, b: 1.0, c: 1.0, f: 0.0, t: 0.0 }, &EpsilonProfile::Zero).is_err());
    }

    #[test]
    fn jacobian_matches_fd() {
        for eps in [EpsilonProfile::Zero, EpsilonProfile::QuadraticBump, EpsilonProfile::Poly { beta: 0.7 }] {
            let j = jacobian(0.8, 1.3, 1.1, &eps);
            let g = |x: &[f64]| {
                let mut dy = [0.0; 4];
                field(&eps, &[x[0], x[1], x[2], 0.0], &mut dy);
                dy[..3].to_vec()
            };
            let fd = fd_jacobian(g, &[0.8, 1.3, 1.1], 1e-6);
            for i in 0..3 {
                for k in 0..3 {
                    assert!((j[i][k] - fd[i][k]).abs() < 1e-7, "{i}{k}");
                }
            }
        }
    }

    #[test]
    fn even_profile_derivative() {
        let e = EpsilonProfile::Even { coefficients: vec![0.0, 0.5, 0.25] };
        let h = 1e-6;
        let fd = (e.eval(0.7 + h) - e.eval(0.7 - h)) / (2.0 * h);
        assert!((e.deriv(0.7) - fd).abs() < 1e-8);
    }

    #[test]
    fn admissibility_flags() {
        assert!(EpsilonProfile::QuadraticBump.admissibility(1e3).admissible());
        assert!(!EpsilonProfile::Poly { beta: -0.1 }.admissibility(1e3).admissible());
        let near = EpsilonProfile::Poly { beta: -0.97 };
        let a = near.admissibility(1e3);
        assert!(!a.nonnegative);
        assert!(a.near_boundary && a.slope_condition);
    }
}
