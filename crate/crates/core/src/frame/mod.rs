//! Orthonormal Kähler frames `k, t, x_i, y_i` whose brackets are
//!
//! ```text
//! [k,t]   = L(k+t)          [x_i,y_i] = N_i(k+t)
//! [k,x_i] = A_i x_i + B_i y_i   [k,y_i] = C_i x_i + D_i y_i
//! [t,x_i] = E_i x_i + F_i y_i   [t,y_i] = G_i x_i + H_i y_i
//! ```
//!
//! with every coefficient a function of the potential `τ` (`k − t = ∇τ`), plus
//! the machinery to compute connection, curvature and soliton residuals.

mod engine;
pub mod expr;
pub mod spec;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use engine::{
    check_point, curvature_at, full_sol_eqns_residual, integrability_residual, kahler_residual, koszul_connection,
    point_curvature, point_sol_eqns, point_soliton, q_of, ricci_form_formula, shear_coefficients, soliton_residuals,
    Connection, CurvatureReport, KahlerResidual, PointCheck, Riemann, SolEqnsResidual, SolitonResiduals,
    StructureConstants,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrameError {
    #[error("curvature-trace Ricci and frame-formula Ricci disagree by {disagreement:e} (tolerance {tolerance:e})")]
    InconsistentRicci { disagreement: f64, tolerance: f64 },
    #[error("N_{block} vanishes while lambda = {lambda}; the first soliton equation cannot hold")]
    DegenerateN { block: usize, lambda: f64 },
    #[error("coefficients at s = {s} are not finite")]
    NonFinite { s: f64 },
    #[error("malformed frame spec: {0}")]
    Spec(String),
}

/// The ten coefficients attached to one block `(x_i, y_i)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub h: f64,
    pub n: f64,
}

impl Block {
    fn map2(&self, o: &Block, op: impl Fn(f64, f64) -> f64) -> Block {
        Block {
            a: op(self.a, o.a),
            b: op(self.b, o.b),
            c: op(self.c, o.c),
            d: op(self.d, o.d),
            e: op(self.e, o.e),
            f: op(self.f, o.f),
            g: op(self.g, o.g),
            h: op(self.h, o.h),
            n: op(self.n, o.n),
        }
    }
    fn finite(&self) -> bool {
        [self.a, self.b, self.c, self.d, self.e, self.f, self.g, self.h, self.n].iter().all(|x| x.is_finite())
    }
}

/// All frame coefficients at one point, plus `f′(τ)`.
///
/// When used as a derivative record every entry is a `τ`-derivative and `df`
/// holds `f″(τ)`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Coeffs {
    pub l: f64,
    pub blocks: Vec<Block>,
    pub df: f64,
}

impl Coeffs {
    pub fn zero(n: usize) -> Self {
        Coeffs { l: 0.0, blocks: vec![Block::default(); n], df: 0.0 }
    }
    fn combine(&self, o: &Coeffs, op: impl Fn(f64, f64) -> f64 + Copy) -> Coeffs {
        Coeffs {
            l: op(self.l, o.l),
            blocks: self.blocks.iter().zip(&o.blocks).map(|(x, y)| x.map2(y, op)).collect(),
            df: op(self.df, o.df),
        }
    }
    fn finite(&self) -> bool {
        self.l.is_finite() && self.df.is_finite() && self.blocks.iter().all(Block::finite)
    }
}

pub type CoeffFn = Arc<dyn Fn(f64) -> Coeffs + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Coefficient values and `τ`-derivatives at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FramePoint {
    /// Value of the evaluation coordinate.
    pub s: f64,
    pub lambda: f64,
    pub value: Coeffs,
    pub deriv: Coeffs,
    /// Derivatives came from finite differences rather than analytic handles.
    pub fd_derived: bool,
}

impl FramePoint {
    pub fn n(&self) -> usize {
        self.value.blocks.len()
    }
    pub fn dim(&self) -> usize {
        2 * self.n() + 2
    }
}

/// A frame given by coefficient handles in some evaluation coordinate `s`.
///
/// Families are most naturally written in their own coordinate (`φ` for the
/// Heisenberg solitons, `t` for the cohomogeneity-one ODE families), so the
/// handles take `s` while every derivative handle returns `d/dτ`. When no
/// derivative handle is supplied, derivatives are central differences in `s`
/// with step `1e−5·max(1,|s|)`, chained through `ds/dτ`.
#[derive(Clone)]
pub struct FrameStructure {
    pub n: usize,
    pub lambda: f64,
    pub label: String,
    pub coordinate: String,
    values: CoeffFn,
    derivatives: Option<CoeffFn>,
    ds_dtau: Option<ScalarFn>,
}

impl fmt::Debug for FrameStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FrameStructure")
            .field("n", &self.n)
            .field("lambda", &self.lambda)
            .field("label", &self.label)
            .field("coordinate", &self.coordinate)
            .field("analytic_derivatives", &self.derivatives.is_some())
            .finish()
    }
}

impl FrameStructure {
    /// A frame parametrized directly by `τ`.
    pub fn new(n: usize, lambda: f64, values: CoeffFn, derivatives: Option<CoeffFn>) -> Self {
        FrameStructure {
            n,
            lambda,
            label: "custom".into(),
            coordinate: "tau".into(),
            values,
            derivatives,
            ds_dtau: None,
        }
    }

    /// A frame parametrized by another coordinate `s`, with `ds/dτ` supplied.
    pub fn in_coordinate(
        n: usize,
        lambda: f64,
        coordinate: &str,
        values: CoeffFn,
        derivatives: Option<CoeffFn>,
        ds_dtau: ScalarFn,
    ) -> Self {
        FrameStructure {
            n,
            lambda,
            label: "custom".into(),
            coordinate: coordinate.into(),
            values,
            derivatives,
            ds_dtau: Some(ds_dtau),
        }
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    /// Drops the analytic derivative handles, forcing the finite-difference path.
    pub fn without_derivatives(mut self) -> Self {
        self.derivatives = None;
        self
    }

    pub fn has_analytic_derivatives(&self) -> bool {
        self.derivatives.is_some()
    }

    pub fn values(&self, s: f64) -> Coeffs {
        (self.values)(s)
    }

    /// Finite-difference `τ`-derivatives at `s`.
    pub fn fd_derivatives(&self, s: f64) -> Coeffs {
        let h = 1e-5 * s.abs().max(1.0);
        let plus = (self.values)(s + h);
        let minus = (self.values)(s - h);
        let scale = self.ds_dtau.as_ref().map(|g| g(s)).unwrap_or(1.0);
        plus.combine(&minus, move |p, m| (p - m) / (2.0 * h) * scale)
    }

    pub fn point(&self, s: f64) -> Result<FramePoint, FrameError> {
        let value = (self.values)(s);
        let (deriv, fd_derived) = match &self.derivatives {
            Some(d) => (d(s), false),
            None => (self.fd_derivatives(s), true),
        };
        if !value.finite() || !deriv.finite() {
            return Err(FrameError::NonFinite { s });
        }
        Ok(FramePoint { s, lambda: self.lambda, value, deriv, fd_derived })
    }

    /// Largest gap between the analytic derivative handles and finite
    /// differences at `s`, relative to `max(1, |analytic|)`.
    pub fn derivative_consistency(&self, s: f64) -> Option<f64> {
        let d = self.derivatives.as_ref()?(s);
        let fd = self.fd_derivatives(s);
        let diff = d.combine(&fd, |x, y| (x - y).abs() / x.abs().max(1.0));
        let mut m = diff.l.max(diff.df);
        for b in &diff.blocks {
            for v in [b.a, b.b, b.c, b.d, b.e, b.f, b.g, b.h, b.n] {
                m = m.max(v);
            }
        }
        Some(m)
    }
}
