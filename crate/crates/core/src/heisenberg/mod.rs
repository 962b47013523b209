//! The explicit expanding solitons on `ℝ × Heis_{2n+1}`:
//!
//! ```text
//! g = φ Σ(σ_i² + ρ_i²) + (F_n(φ)/φ^{n−1}) ζ² + (φ^{n−1}/F_n(φ)) dφ²,   f = −φ,   λ = −1
//! ```
//!
//! Closed-form metric and curvature data, the same soliton rebuilt as a
//! [`FrameStructure`] so the generic engine can check it, the four-dimensional
//! curvature operator, and completeness/asymptotics.

mod completeness;
mod dim4;
pub mod special;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use completeness::{type_check, PhiEnd, QDomain, TypeReport};
pub use dim4::{dim4_operator, sec_dim4, sec_extremes_dim4, Dim4CurvatureOperator, Dim4Extremes};
pub use special::{f as big_f, f_prime, f_second, theta, MAX_N};

use crate::frame::{Block, Coeffs, CurvatureReport, FrameError, FrameStructure};
use crate::numerics::QuadratureError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeisenbergError {
    #[error("phi must be positive and finite, got {0}")]
    PhiNonPositive(f64),
    #[error("n = {0} is outside the supported range 1..=18")]
    NTooLarge(u32),
    #[error("the four-dimensional operator needs n = 1, got n = {0}")]
    NotFourDimensional(u32),
    #[error("q = {q} lies outside the domain ({qa}, {qb})")]
    QOutsideDomain { q: f64, qa: f64, qb: f64 },
    #[error("determinant identity off by {0:e}")]
    DeterminantIdentity(f64),
    #[error("root finding did not converge for q = {0}")]
    NoRoot(f64),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Frame(#[from] FrameError),
}

/// Metric profile `c²(φ) = F(φ)/φ^{n−1}` in the frame of the soliton.
///
/// The soliton uses `F_n`. `Cusp` (`F = 2φ^{n+1}/(n+2)`) and `Cone` (`F = 2φⁿ`)
/// are the small- and large-`φ` models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Soliton,
    Cusp,
    Cone,
}

impl Profile {
    /// `(F, F′, F″)` at `φ`.
    pub fn eval(self, n: u32, phi: f64) -> Result<[f64; 3], HeisenbergError> {
        if !(phi > 0.0) || !phi.is_finite() {
            return Err(HeisenbergError::PhiNonPositive(phi));
        }
        let nf = n as f64;
        Ok(match self {
            Profile::Soliton => [special::f(n, phi)?, special::f_prime(n, phi)?, special::f_second(n, phi)?],
            Profile::Cusp => {
                let k = 2.0 / (nf + 2.0);
                [
                    k * phi.powi(n as i32 + 1),
                    k * (nf + 1.0) * phi.powi(n as i32),
                    k * (nf + 1.0) * nf * phi.powi(n as i32 - 1),
                ]
            }
            Profile::Cone => [
                2.0 * phi.powi(n as i32),
                2.0 * nf * phi.powi(n as i32 - 1),
                2.0 * nf * (nf - 1.0) * phi.powi(n as i32 - 2),
            ],
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricComponents {
    pub g_fiber: f64,
    pub g_zeta: f64,
    pub g_phiphi: f64,
}

/// Hessian of `f` on the frame: `Hess f(x_i,x_i) = −N f′` and
/// `Hess f(k,k) = 2f″` (τ-derivatives).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hessian {
    pub xx: f64,
    pub kk: f64,
}

/// The soliton of complex dimension `m = n + 1`; `λ = k = −1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HeisenbergSoliton {
    pub n: u32,
}

impl HeisenbergSoliton {
    pub fn new(n: u32) -> Result<Self, HeisenbergError> {
        if n == 0 || n > MAX_N {
            return Err(HeisenbergError::NTooLarge(n));
        }
        Ok(HeisenbergSoliton { n })
    }

    pub fn lambda(&self) -> f64 {
        -1.0
    }

    pub fn k(&self) -> f64 {
        -1.0
    }

    /// Complex dimension.
    pub fn m(&self) -> u32 {
        self.n + 1
    }

    pub fn f(&self, phi: f64) -> Result<f64, HeisenbergError> {
        special::f(self.n, phi)
    }

    pub fn metric_components(&self, phi: f64) -> Result<MetricComponents, HeisenbergError> {
        let fv = self.f(phi)?;
        let p = phi.powi(self.n as i32 - 1);
        Ok(MetricComponents { g_fiber: phi, g_zeta: fv / p, g_phiphi: p / fv })
    }

    /// Closed-form frame curvatures.
    pub fn curvatures(&self, phi: f64) -> Result<CurvatureReport, HeisenbergError> {
        let n = self.n as f64;
        let fv = self.f(phi)?;
        let u = fv / phi.powi(self.n as i32 + 1);
        let w = fv / phi.powi(self.n as i32);
        let sec_xy = -u;
        let sec_kx = ((n + 1.0 + phi) * u - 2.0) / 4.0;
        let sec_kt = -(n * (n + 1.0) / 2.0 + n * phi + phi * phi / 2.0) * u + n - 1.0 + phi;
        let ricci_xy = 0.5 * (w - 2.0);
        let ricci_kt = 0.5 * (-(phi + n) * w + 2.0 * phi - 2.0);
        let scalar = -fv / phi.powi(self.n as i32 - 1) + 2.0 * (phi - n - 1.0);
        let k = self.n as usize;
        Ok(CurvatureReport {
            sec_xy: vec![sec_xy; k],
            sec_kx: vec![sec_kx; k],
            sec_kt,
            ricci_xy: vec![ricci_xy; k],
            ricci_kt,
            scalar,
            ricci_disagreement: 0.0,
            fd_derived: false,
        })
    }

    pub fn hessian(&self, phi: f64) -> Result<Hessian, HeisenbergError> {
        let [fv, fp, _] = Profile::Soliton.eval(self.n, phi)?;
        let nn = self.n as i32;
        let dc2 = fp * phi.powi(1 - nn) + (1.0 - self.n as f64) * fv * phi.powi(-nn);
        Ok(Hessian { xx: -fv / (2.0 * phi.powi(nn)), kk: -0.5 * dc2 })
    }

    /// The soliton as a frame in the coordinate `φ`.
    pub fn frame(&self) -> FrameStructure {
        profile_frame(self.n, Profile::Soliton).with_lambda(-1.0).with_label("heisenberg")
    }

    /// `max |g/g_model − 1|` over the metric components.
    pub fn asymptotic_model_deviation(&self, end: Profile, phi: f64) -> Result<f64, HeisenbergError> {
        let g = self.metric_components(phi)?;
        let [fm, _, _] = end.eval(self.n, phi)?;
        let zeta = fm / phi.powi(self.n as i32 - 1);
        Ok((g.g_zeta / zeta - 1.0).abs().max((g.g_phiphi * zeta - 1.0).abs()))
    }

    /// `Scal · d²` with `d = √2(√φ − √φ_p)`, which tends to `−4mφ_p` as `φ → 0`.
    pub fn scalar_distance_product(&self, phi: f64, phi_p: f64) -> Result<f64, HeisenbergError> {
        let scal = self.curvatures(phi)?.scalar;
        let d = 2f64.sqrt() * (phi.sqrt() - phi_p.sqrt());
        Ok(scal * d * d)
    }
}

fn coeffs_from(n: usize, l: f64, nn: f64, df: f64) -> Coeffs {
    let a = nn / 2.0;
    let block = Block { a, b: 0.0, c: 0.0, d: a, e: -a, f: 0.0, g: 0.0, h: -a, n: nn };
    Coeffs { l, blocks: vec![block; n], df }
}

/// Frame of `φ Σ(σ_i² + ρ_i²) + c² ζ² + c⁻² dφ²` with `c² = F/φ^{n−1}`.
///
/// `τ` runs along `φ` with `dφ/dτ = c/√2`. The soliton profile carries the
/// potential `f′(τ) = −c/√2`; the model profiles carry none.
pub fn profile_frame(n: u32, profile: Profile) -> FrameStructure {
    let nb = n as usize;
    let s2 = std::f64::consts::SQRT_2;
    let potential = if profile == Profile::Soliton { 1.0 } else { 0.0 };
    // c, c_φ, c_φφ
    let c_data = move |phi: f64| -> [f64; 3] {
        let [fv, fp, fpp] = match profile.eval(n, phi) {
            Ok(v) => v,
            Err(_) => return [f64::NAN; 3],
        };
        let ni = n as i32;
        let nf = n as f64;
        let c2 = fv * phi.powi(1 - ni);
        let p1 = fp * phi.powi(1 - ni) + (1.0 - nf) * fv * phi.powi(-ni);
        let p2 =
            fpp * phi.powi(1 - ni) + 2.0 * (1.0 - nf) * fp * phi.powi(-ni) - nf * (1.0 - nf) * fv * phi.powi(-ni - 1);
        let c = c2.sqrt();
        let c1 = p1 / (2.0 * c);
        [c, c1, (p2 - 2.0 * c1 * c1) / (2.0 * c)]
    };
    let values = Arc::new(move |phi: f64| {
        let [c, c1, _] = c_data(phi);
        coeffs_from(nb, -c1 / s2, -c / (s2 * phi), -potential * c / s2)
    });
    let derivs = Arc::new(move |phi: f64| {
        let [c, c1, c2] = c_data(phi);
        let dphi = c / s2;
        let n_phi = -(c1 / phi - c / (phi * phi)) / s2;
        coeffs_from(nb, -c * c2 / 2.0, dphi * n_phi, -potential * c * c1 / 2.0)
    });
    let ds = Arc::new(move |phi: f64| c_data(phi)[0] / s2);
    let label = match profile {
        Profile::Soliton => "heisenberg",
        Profile::Cusp => "heisenberg-cusp",
        Profile::Cone => "heisenberg-cone",
    };
    FrameStructure::in_coordinate(nb, 0.0, "phi", values, Some(derivs), ds).with_label(label)
}
