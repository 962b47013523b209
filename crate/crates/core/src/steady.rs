//! Steady (`λ = 0`) cohomogeneity-one solitons with constant `a_i`.
//!
//! With `β = Π a_i b_i` (`b_i = ℓ_i a_i`) the remaining unknown satisfies
//! `kβc′ + c′²/c³ − c″/c² = 0`, solved by
//!
//! ```text
//! c(t) = (k₂ e^{k₁t} + kβ/k₁)^{−1/2}
//! ```
//!
//! Whenever `k₂ ≠ 0` some end of the `t`-interval lies at finite distance along
//! the normal geodesic (either `c` blows up at a finite `t`, or `c` decays
//! exponentially as `t → ±∞`), so these metrics are incomplete.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frame::{q_of, Block, Coeffs, FrameError, FrameStructure};
use crate::numerics::{DivergenceProbe, Growth, Quadrature, QuadratureError, Toward};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SteadyError {
    #[error("t = {t} is outside the interval where c² > 0 ({lo}, {hi})")]
    OutsideInterval { t: f64, lo: f64, hi: f64 },
    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),
    #[error("case (I) has no nonconstant solutions: differentiating its constraint forces c₀³ Π a_i² Σ (Γ_jj^z)² ℓ_j⁻² a_j⁻⁴ = 0")]
    CaseINonexistent,
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Frame(#[from] FrameError),
}

fn default_ell() -> Vec<f64> {
    vec![1.0]
}
fn default_a() -> Vec<f64> {
    vec![1.0]
}

/// Parameters of a case-(II) solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SteadyII {
    pub k: f64,
    pub k1: f64,
    pub k2: f64,
    /// `Π a_i b_i`.
    pub beta: f64,
    #[serde(default = "default_ell")]
    pub ell: Vec<f64>,
    #[serde(default = "default_a")]
    pub a: Vec<f64>,
    /// Structure constant `Γ_zi^i`, shared by all blocks; `Γ_iz^i = ℓ_i² Γ_zi^i`.
    #[serde(default)]
    pub gamma_zi: f64,
}

/// Where `c² > 0`; `None` for an infinite end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
}

impl Interval {
    pub fn contains(&self, t: f64) -> bool {
        self.lo.is_none_or(|l| t > l) && self.hi.is_none_or(|h| t < h)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthRecord {
    pub t0: f64,
    pub t1: f64,
    pub closed_form: f64,
    pub quadrature: f64,
    pub difference: f64,
}

/// One end of the `t`-interval, seen from the reference point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EndReport {
    /// `None` for an infinite end.
    pub t: Option<f64>,
    /// `"blows up"`, `"decays"` or `"constant"`.
    pub c_behaviour: &'static str,
    /// Exact length from the reference point; `None` when infinite.
    pub length: Option<f64>,
    /// Decade-by-decade quadrature of `βc` toward the end.
    pub probe: Growth,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IncompletenessVerdict {
    pub verdict: String,
    pub reference_t: f64,
    pub lower: EndReport,
    pub upper: EndReport,
    /// The probe agrees with the exact lengths at both ends (finiteness, and
    /// values to 1e−6 where finite).
    pub consistent: bool,
    pub note: &'static str,
}

impl IncompletenessVerdict {
    pub fn incomplete(&self) -> bool {
        self.lower.length.is_some() || self.upper.length.is_some()
    }
}

impl SteadyII {
    /// One block with `ℓ = 1` and `a = √β`.
    pub fn new(k: f64, beta: f64, k1: f64, k2: f64) -> Self {
        SteadyII { k, k1, k2, beta, ell: vec![1.0], a: vec![beta.sqrt()], gamma_zi: 0.0 }
    }

    /// Builds `β = Π ℓ_i a_i²` from the block constants.
    pub fn from_blocks(k: f64, k1: f64, k2: f64, a: Vec<f64>, ell: Vec<f64>) -> Self {
        let beta = a.iter().zip(&ell).map(|(a, l)| l * a * a).product();
        SteadyII { k, k1, k2, beta, ell, a, gamma_zi: 0.0 }
    }

    pub fn n(&self) -> usize {
        self.ell.len()
    }

    fn d(&self, t: f64) -> f64 {
        let base = self.k * self.beta / self.k1;
        match self.interval() {
            // k₂e^{k₁t_b} = −kβ/k₁, so D = −(kβ/k₁)·expm1(k₁(t − t_b)) without
            // cancellation near t_b.
            Interval { lo: Some(tb), .. } | Interval { hi: Some(tb), .. } => -base * (self.k1 * (t - tb)).exp_m1(),
            _ if self.k2 == 0.0 => base,
            _ => self.k2 * (self.k1 * t).exp() + base,
        }
    }

    /// Checks `k₁ ≠ 0`, `β > 0`, matching block lists, and that `c²` is
    /// positive somewhere.
    pub fn validate(&self) -> Result<(), SteadyError> {
        if self.k1 == 0.0 || !self.k1.is_finite() {
            return Err(SteadyError::Inadmissible("k1 must be nonzero".into()));
        }
        if !(self.beta > 0.0) {
            return Err(SteadyError::Inadmissible("beta must be positive".into()));
        }
        if self.ell.len() != self.a.len() || self.ell.is_empty() || self.ell.iter().any(|l| !(*l > 0.0)) {
            return Err(SteadyError::Inadmissible("ell and a must be nonempty lists of equal length, ell > 0".into()));
        }
        if self.k2 <= 0.0 && self.k * self.beta / self.k1 <= 0.0 {
            return Err(SteadyError::Inadmissible("c² is nowhere positive".into()));
        }
        Ok(())
    }

    /// The open `t`-interval on which `c² > 0`.
    pub fn interval(&self) -> Interval {
        let base = self.k * self.beta / self.k1;
        if self.k2 == 0.0 {
            return Interval { lo: None, hi: None };
        }
        let x = -base / self.k2;
        if x <= 0.0 {
            // k₂ e^{k₁t} and kβ/k₁ share a sign: positive everywhere.
            return Interval { lo: None, hi: None };
        }
        let t_star = x.ln() / self.k1;
        // D is increasing in t iff k₁k₂ > 0.
        if self.k1 * self.k2 > 0.0 {
            Interval { lo: Some(t_star), hi: None }
        } else {
            Interval { lo: None, hi: Some(t_star) }
        }
    }

    fn check_t(&self, t: f64) -> Result<(), SteadyError> {
        let i = self.interval();
        if !i.contains(t) || !(self.d(t) > 0.0) {
            return Err(SteadyError::OutsideInterval {
                t,
                lo: i.lo.unwrap_or(f64::NEG_INFINITY),
                hi: i.hi.unwrap_or(f64::INFINITY),
            });
        }
        Ok(())
    }

    /// `(c, c′, c″)` at `t`.
    pub fn c_derivs(&self, t: f64) -> Result<[f64; 3], SteadyError> {
        self.check_t(t)?;
        let d = self.d(t);
        let d1 = self.k1 * self.k2 * (self.k1 * t).exp();
        let d2 = self.k1 * d1;
        let c = d.powf(-0.5);
        let c1 = -0.5 * d.powf(-1.5) * d1;
        let c2 = 0.75 * d.powf(-2.5) * d1 * d1 - 0.5 * d.powf(-1.5) * d2;
        Ok([c, c1, c2])
    }

    pub fn c_of_t(&self, t: f64) -> Result<f64, SteadyError> {
        Ok(self.c_derivs(t)?[0])
    }

    /// `kβc′ + c′²/c³ − c″/c²` from the closed-form derivatives.
    pub fn ode_residual(&self, t: f64) -> Result<f64, SteadyError> {
        let [c, c1, c2] = self.c_derivs(t)?;
        Ok(self.k * self.beta * c1 + c1 * c1 / c.powi(3) - c2 / (c * c))
    }

    /// The tanh⁻¹ form of the normal-geodesic length, up to a constant; its
    /// `t`-derivative is `−sign(k₁)·βc`.
    pub fn length_potential(&self, t: f64) -> Result<f64, SteadyError> {
        self.check_length_domain()?;
        self.check_t(t)?;
        let u = (self.k1 * self.d(t) / (self.k * self.beta)).sqrt();
        if !(u > 0.0 && u < 1.0) {
            return Err(SteadyError::Inadmissible(format!("tanh⁻¹ argument {u} outside (0, 1)")));
        }
        Ok(2.0 * (self.beta / (self.k * self.k1)).sqrt() * u.atanh())
    }

    /// The tanh⁻¹ form is real only for `kk₁ > 0` and `k₂ < 0`.
    pub fn check_length_domain(&self) -> Result<(), SteadyError> {
        self.validate()?;
        if !(self.k * self.k1 > 0.0) {
            return Err(SteadyError::Inadmissible("length formula needs k·k1 > 0".into()));
        }
        if !(self.k2 < 0.0) {
            return Err(SteadyError::Inadmissible("length formula needs k2 < 0".into()));
        }
        Ok(())
    }

    /// Length of the normal geodesic over `[t0, t1]`, closed form and
    /// quadrature of `βc dt`.
    pub fn normal_geodesic_length(&self, t0: f64, t1: f64) -> Result<LengthRecord, SteadyError> {
        let closed = (self.length_potential(t1)? - self.length_potential(t0)?).abs();
        let beta = self.beta;
        let g = |t: f64| beta * self.c_of_t(t).unwrap_or(f64::NAN);
        let q = Quadrature { abs_tol: 1e-12, rel_tol: 1e-12, max_subdivisions: 4000 };
        let quad = q.integrate(g, t0.min(t1), t0.max(t1))?.value;
        Ok(LengthRecord { t0, t1, closed_form: closed, quadrature: quad, difference: (closed - quad).abs() })
    }

    /// `∫ du/(u² − K)` with `K = kβ/k₁`, continuous on each branch and
    /// correct at `u ∈ {0, √K, ∞}`.
    fn u_antiderivative(&self, u: f64) -> f64 {
        let kk = self.k * self.beta / self.k1;
        if kk > 0.0 {
            let r = kk.sqrt();
            if u < r {
                -(u / r).atanh() / r
            } else {
                -(r / u).atanh() / r
            }
        } else if kk < 0.0 {
            let r = (-kk).sqrt();
            (u / r).atan() / r
        } else {
            -1.0 / u
        }
    }

    /// Exact normal-geodesic length over `[t0, t1]` for every sign pattern.
    ///
    /// With `u = √D`, `dL/du = 2β/(k₁(u² − kβ/k₁))`; the tanh⁻¹ formula is the
    /// branch `u < √(kβ/k₁)`.
    pub fn length_exact(&self, t0: f64, t1: f64) -> Result<f64, SteadyError> {
        self.validate()?;
        self.check_t(t0)?;
        self.check_t(t1)?;
        if self.k2 == 0.0 {
            return Ok(self.beta * (t1 - t0).abs() * self.c_of_t(t0)?);
        }
        let g = |t: f64| self.u_antiderivative(self.d(t).sqrt());
        Ok((2.0 * self.beta / self.k1 * (g(t1) - g(t0))).abs())
    }

    /// Limit of `u = √D` at an end, and the behaviour of `c` there.
    fn end_limit(&self, finite: Option<f64>, upper: bool) -> (f64, &'static str) {
        if finite.is_some() {
            return (0.0, "blows up");
        }
        if self.k2 == 0.0 {
            return ((self.k * self.beta / self.k1).sqrt(), "constant");
        }
        // e^{k₁t} grows toward this end iff k₁ and the direction agree.
        if (self.k1 > 0.0) == upper {
            (f64::INFINITY, "decays")
        } else {
            let kk = self.k * self.beta / self.k1;
            (kk.max(0.0).sqrt(), if kk > 0.0 { "constant" } else { "blows up" })
        }
    }

    fn end_report(&self, tr: f64, finite: Option<f64>, upper: bool) -> Result<EndReport, SteadyError> {
        let (u_end, c_behaviour) = self.end_limit(finite, upper);
        let length = if self.k2 == 0.0 {
            f64::INFINITY
        } else {
            let ur = self.d(tr).sqrt();
            (2.0 * self.beta / self.k1 * (self.u_antiderivative(u_end) - self.u_antiderivative(ur))).abs()
        };
        let toward = match (finite, upper) {
            (Some(x), _) => Toward::Point(x),
            (None, true) => Toward::PlusInfinity,
            (None, false) => Toward::MinusInfinity,
        };
        let beta = self.beta;
        let g = |t: f64| beta * self.c_of_t(t).unwrap_or(f64::NAN);
        let probe = DivergenceProbe::default().integrate_toward(g, tr, toward)?;
        Ok(EndReport { t: finite, c_behaviour, length: length.is_finite().then_some(length), probe })
    }

    /// Lengths from a reference point to both ends of the interval, exact and
    /// by divergence-aware quadrature.
    pub fn incompleteness_verdict(&self) -> Result<IncompletenessVerdict, SteadyError> {
        self.validate()?;
        let note = "the extension of the incompleteness claim to metrics with a singular orbit is not checked";
        let i = self.interval();
        let w = 1.0 / self.k1.abs();
        let reference_t = match (i.lo, i.hi) {
            (_, Some(h)) => h - w,
            (Some(l), None) => l + w,
            (None, None) => 0.0,
        };
        let lower = self.end_report(reference_t, i.lo, false)?;
        let upper = self.end_report(reference_t, i.hi, true)?;
        let agrees = |e: &EndReport| match (e.length, e.probe.value()) {
            (Some(l), Some(v)) => (l - v).abs() <= 1e-6 * l.max(1.0),
            (None, None) => true,
            _ => false,
        };
        let consistent = agrees(&lower) && agrees(&upper);
        let describe = |e: &EndReport, upper: bool| match e.t {
            Some(t) => format!("t = {t}"),
            None => format!("t → {}∞", if upper { "+" } else { "−" }),
        };
        let finite: Vec<String> = [(&lower, false), (&upper, true)]
            .into_iter()
            .filter(|(e, _)| e.length.is_some())
            .map(|(e, up)| describe(e, up))
            .collect();
        let verdict = if finite.is_empty() {
            "no blow-up in window".to_string()
        } else {
            format!("incomplete: the normal geodesic reaches {} at finite length", finite.join(" and "))
        };
        Ok(IncompletenessVerdict { verdict, reference_t, lower, upper, consistent, note })
    }

    /// Case-(II) frame in the coordinate `t` with `λ = 0`, `f′ = kαc`,
    /// `α = βc`.
    pub fn frame(&self) -> FrameStructure {
        let p = Arc::new(self.clone());
        let s2 = std::f64::consts::SQRT_2;
        // B = F = −Γ_zi ℓ·s and C = G = Γ_iz ℓ⁻¹·s = Γ_zi ℓ·s, with s = 1/(√2c).
        let blocks = |p: &SteadyII, s: f64| -> Vec<Block> {
            p.ell
                .iter()
                .map(|l| {
                    let x = p.gamma_zi * l * s;
                    Block { b: -x, f: -x, c: x, g: x, ..Block::default() }
                })
                .collect()
        };
        let pv = p.clone();
        let values = Arc::new(move |t: f64| {
            let [c, c1, _] = pv.c_derivs(t).unwrap_or([f64::NAN; 3]);
            Coeffs { l: -c1 / (s2 * pv.beta * c * c), blocks: blocks(&pv, 1.0 / (s2 * c)), df: pv.k * c / s2 }
        });
        let pd = p.clone();
        let derivs = Arc::new(move |t: f64| {
            let [c, c1, c2] = pd.c_derivs(t).unwrap_or([f64::NAN; 3]);
            let b = pd.beta;
            let dl = -(c2 / (c * c) - 2.0 * c1 * c1 / c.powi(3)) / (2.0 * b * b * c);
            let g = c1 / (2.0 * b * c.powi(3));
            Coeffs { l: dl, blocks: blocks(&pd, -g), df: pd.k * c1 / (2.0 * b * c) }
        });
        let ds = Arc::new(move |t: f64| {
            let c = p.c_of_t(t).unwrap_or(f64::NAN);
            1.0 / (s2 * p.beta * c)
        });
        FrameStructure::in_coordinate(self.n(), 0.0, "t", values, Some(derivs), ds).with_label("steady-II")
    }
}

/// Case (I), constant `c` with `Q = f′`, admits no nonconstant metric; this
/// always refuses.
pub fn case_i_nonconstant() -> Result<SteadyII, SteadyError> {
    Err(SteadyError::CaseINonexistent)
}

/// Which of the two steady cases a frame point satisfies: `Q = f′(τ)` (I) or
/// all `N_i = 0` (II).
pub fn case_split(fs: &FrameStructure, s: f64, tol: f64) -> Result<&'static str, SteadyError> {
    let p = fs.point(s)?;
    let one = (q_of(&p) - p.value.df).abs() <= tol;
    let two = p.value.blocks.iter().all(|b| b.n.abs() <= tol);
    Ok(match (one, two) {
        (true, true) => "both",
        (true, false) => "I",
        (false, true) => "II",
        (false, false) => "neither",
    })
}
