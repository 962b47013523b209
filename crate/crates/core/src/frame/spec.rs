//! JSON frame documents.
//!
//! A document names a built-in family
//!
//! ```json
//! {"n": 1, "lambda": -1, "family": {"name": "heisenberg", "params": {"profile": "soliton"}}}
//! ```
//!
//! or lists coefficients as polynomials (ascending powers of `τ`) or ratios
//! `{"num": [...], "den": [...]}`; omitted coefficients are zero and `df` is
//! `f′(τ)`:
//!
//! ```json
//! {"n": 1, "lambda": 0, "coefficients": {"L": [0, 1], "blocks": [{"A": [1], "D": [-1]}], "df": [0]}}
//! ```
//!
//! Family parameters:
//!
//! * `heisenberg`: `profile` = `soliton` (default), `cusp` or `cone`; grid in `φ`.
//! * `e2`: `q`, optional `epsilon` (an ε-profile object, default zero),
//!   `delta`, `b_max`; grid in `t` along the shot trajectory.
//! * `steady-II`: `k`, `k1`, `k2`, `beta`, optional `ell`, `a`, `gamma_zi`;
//!   grid in `t`.

use std::sync::Arc;

use serde::Deserialize;

use super::expr::Expr;
use super::{Block, Coeffs, FrameError, FrameStructure};
use crate::e2::{shoot_unstable, EpsilonProfile, ShootSettings};
use crate::heisenberg::{profile_frame, Profile};
use crate::numerics::{linspace, logspace};
use crate::steady::SteadyII;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSpec {
    pub n: usize,
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub family: Option<Family>,
    #[serde(default)]
    pub coefficients: Option<CoefficientSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "name", content = "params")]
pub enum Family {
    #[serde(rename = "heisenberg")]
    Heisenberg(HeisenbergParams),
    #[serde(rename = "e2")]
    E2(E2Params),
    #[serde(rename = "steady-II")]
    SteadyII(SteadyII),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeisenbergParams {
    #[serde(default)]
    pub profile: Option<Profile>,
}

fn zero_eps() -> EpsilonProfile {
    EpsilonProfile::Zero
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct E2Params {
    pub q: f64,
    #[serde(default = "zero_eps")]
    pub epsilon: EpsilonProfile,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub b_max: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    #[serde(rename = "A", default)]
    pub a: Expr,
    #[serde(rename = "B", default)]
    pub b: Expr,
    #[serde(rename = "C", default)]
    pub c: Expr,
    #[serde(rename = "D", default)]
    pub d: Expr,
    #[serde(rename = "E", default)]
    pub e: Expr,
    #[serde(rename = "F", default)]
    pub f: Expr,
    #[serde(rename = "G", default)]
    pub g: Expr,
    #[serde(rename = "H", default)]
    pub h: Expr,
    #[serde(rename = "N", default)]
    pub n: Expr,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientSpec {
    #[serde(rename = "L", default)]
    pub l: Expr,
    pub blocks: Vec<BlockSpec>,
    #[serde(default)]
    pub df: Expr,
}

/// A loaded frame and the grid it is naturally checked on.
#[derive(Debug, Clone)]
pub struct LoadedFrame {
    pub frame: FrameStructure,
    pub default_grid: Vec<f64>,
}

fn spec_err(e: impl std::fmt::Display) -> FrameError {
    FrameError::Spec(e.to_string())
}

impl BlockSpec {
    fn eval(&self, x: f64, d: bool) -> Block {
        let v = |e: &Expr| if d { e.derivative(x) } else { e.eval(x) };
        Block {
            a: v(&self.a),
            b: v(&self.b),
            c: v(&self.c),
            d: v(&self.d),
            e: v(&self.e),
            f: v(&self.f),
            g: v(&self.g),
            h: v(&self.h),
            n: v(&self.n),
        }
    }
}

impl FrameSpec {
    pub fn from_json(text: &str) -> Result<Self, FrameError> {
        let spec: FrameSpec = serde_json::from_str(text).map_err(spec_err)?;
        if spec.n == 0 {
            return Err(spec_err("n must be at least 1"));
        }
        match (&spec.family, &spec.coefficients) {
            (Some(_), Some(_)) => Err(spec_err("give either `family` or `coefficients`, not both")),
            (None, None) => Err(spec_err("missing `family` or `coefficients`")),
            (None, Some(c)) if c.blocks.len() != spec.n => {
                Err(spec_err(format!("expected {} blocks, found {}", spec.n, c.blocks.len())))
            }
            _ => Ok(spec),
        }
    }

    pub fn load(path: &std::path::Path) -> Result<Self, FrameError> {
        let text = std::fs::read_to_string(path).map_err(|e| spec_err(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn build(&self) -> Result<LoadedFrame, FrameError> {
        if let Some(c) = &self.coefficients {
            let c1 = Arc::new(c.clone());
            let c2 = c1.clone();
            let values = Arc::new(move |x: f64| Coeffs {
                l: c1.l.eval(x),
                blocks: c1.blocks.iter().map(|b| b.eval(x, false)).collect(),
                df: c1.df.eval(x),
            });
            let derivs = Arc::new(move |x: f64| Coeffs {
                l: c2.l.derivative(x),
                blocks: c2.blocks.iter().map(|b| b.eval(x, true)).collect(),
                df: c2.df.derivative(x),
            });
            let fs = FrameStructure::new(self.n, self.lambda.unwrap_or(0.0), values, Some(derivs));
            return Ok(LoadedFrame { frame: fs.with_label("coefficients"), default_grid: linspace(-1.0, 1.0, 9) });
        }
        match self.family.as_ref().expect("validated") {
            Family::Heisenberg(p) => {
                let profile = p.profile.unwrap_or(Profile::Soliton);
                if self.n > crate::heisenberg::MAX_N as usize {
                    return Err(spec_err(format!("n = {} too large", self.n)));
                }
                let natural = if profile == Profile::Soliton { -1.0 } else { 0.0 };
                let fs = profile_frame(self.n as u32, profile).with_lambda(self.lambda.unwrap_or(natural));
                Ok(LoadedFrame { frame: fs, default_grid: logspace(0.05, 20.0, 9) })
            }
            Family::E2(p) => {
                if self.n != 1 {
                    return Err(spec_err("the e2 family has n = 1"));
                }
                let mut s = ShootSettings::default();
                if let Some(d) = p.delta {
                    s.delta = d;
                }
                if let Some(b) = p.b_max {
                    s.b_max = b;
                }
                let traj = shoot_unstable(p.q, &p.epsilon, &s).map_err(spec_err)?;
                // Interior points between b = 1e−3 and b = b_max/10.
                let t0 = traj.at_b(1e-3).map(|x| x.0).unwrap_or(traj.trajectory.t_start());
                let t1 = traj.at_b(s.b_max / 10.0).map(|x| x.0).unwrap_or(traj.trajectory.t_end());
                let fs = traj.frame().with_lambda(self.lambda.unwrap_or(-1.0));
                Ok(LoadedFrame { frame: fs, default_grid: linspace(t0, t1, 9) })
            }
            Family::SteadyII(p) => {
                p.validate().map_err(spec_err)?;
                if p.n() != self.n {
                    return Err(spec_err(format!("n = {} but {} blocks given", self.n, p.n())));
                }
                let i = p.interval();
                let grid = match (i.lo, i.hi) {
                    (_, Some(h)) => linspace(h - 3.0 / p.k1.abs(), h - 0.1 / p.k1.abs(), 9),
                    (Some(l), None) => linspace(l + 0.1 / p.k1.abs(), l + 3.0 / p.k1.abs(), 9),
                    (None, None) => linspace(-2.0, 2.0, 9),
                };
                let fs = p.frame().with_lambda(self.lambda.unwrap_or(0.0));
                Ok(LoadedFrame { frame: fs, default_grid: grid })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unknown_and_mixed() {
        assert!(FrameSpec::from_json(r#"{"n":1,"family":{"name":"heisenberg","params":{}},"extra":1}"#).is_err());
        assert!(FrameSpec::from_json(r#"{"n":1,"family":{"name":"heisenberg","params":{"foo":1}}}"#).is_err());
        assert!(FrameSpec::from_json(r#"{"n":2,"coefficients":{"blocks":[{}]}}"#).is_err());
        assert!(FrameSpec::from_json(r#"{"n":1}"#).is_err());
    }

    #[test]
    fn coefficient_frame() {
        let s = FrameSpec::from_json(r#"{"n":1,"lambda":0,"coefficients":{"L":[0,1],"blocks":[{"A":[1],"D":[-1]}]}}"#)
            .unwrap();
        let f = s.build().unwrap().frame;
        let p = f.point(2.0).unwrap();
        assert_eq!(p.value.l, 2.0);
        assert_eq!(p.deriv.l, 1.0);
        assert_eq!(p.value.blocks[0].d, -1.0);
    }
}
