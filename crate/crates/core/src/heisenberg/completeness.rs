//! Distances, flow times, the coordinate `q` and the curvature sweep.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::dim4::sec_extremes_dim4;
use super::{special, HeisenbergError, HeisenbergSoliton};
use crate::frame::point_curvature;
use crate::numerics::{DivergenceProbe, Growth, Quadrature, Toward};

/// Endpoint of a `φ` integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PhiEnd {
    Zero,
    Infinity,
    At(f64),
}

/// Range of `q = q₀ + ∫_{φ₀}^{φ} dφ̃/F_n`; `None` marks an infinite end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QDomain {
    pub qa: Option<f64>,
    pub qb: Option<f64>,
}

impl QDomain {
    pub fn contains(&self, q: f64) -> bool {
        self.qa.is_none_or(|a| q > a) && self.qb.is_none_or(|b| q < b)
    }
}

/// Tighter than this sits at the evaluation noise of `F`.
fn tight() -> Quadrature {
    Quadrature { abs_tol: 1e-13, rel_tol: 1e-12, max_subdivisions: 4000 }
}

impl HeisenbergSoliton {
    fn integral(&self, g: impl Fn(f64) -> f64, phi0: f64, to: PhiEnd, cap: f64) -> Result<Growth, HeisenbergError> {
        if !(phi0 > 0.0) {
            return Err(HeisenbergError::PhiNonPositive(phi0));
        }
        match to {
            PhiEnd::At(phi1) => {
                if !(phi1 > 0.0) {
                    return Err(HeisenbergError::PhiNonPositive(phi1));
                }
                let v = tight().integrate(&g, phi0.min(phi1), phi0.max(phi1))?.value;
                Ok(Growth::Converges { value: if phi1 >= phi0 { v } else { -v }, tail_estimate: 0.0 })
            }
            PhiEnd::Infinity => Ok(DivergenceProbe::with_cap(cap).integrate_toward(g, phi0, Toward::PlusInfinity)?),
            PhiEnd::Zero => {
                let r = DivergenceProbe::with_cap(cap).integrate_toward(g, phi0, Toward::Point(0.0))?;
                // Integrating downward: flip to the signed value.
                Ok(match r {
                    Growth::Converges { value, tail_estimate } => Growth::Converges { value: -value, tail_estimate },
                    Growth::Diverges { partial, exponent, decades } => {
                        Growth::Diverges { partial: -partial, exponent, decades }
                    }
                })
            }
        }
    }

    /// Length of the `φ`-line from `φ₀` to `to`, `∫ √(φ^{n−1}/F_n) dφ`.
    /// Unsigned; an infinite length comes back as [`Growth::Diverges`].
    pub fn distance(&self, phi0: f64, to: PhiEnd) -> Result<Growth, HeisenbergError> {
        let n = self.n;
        let g = move |phi: f64| (phi.powi(n as i32 - 1) / special::f(n, phi).unwrap_or(f64::NAN)).sqrt();
        Ok(match self.integral(g, phi0, to, 1e6)? {
            Growth::Converges { value, tail_estimate } => Growth::Converges { value: value.abs(), tail_estimate },
            Growth::Diverges { partial, exponent, decades } => {
                Growth::Diverges { partial: partial.abs(), exponent, decades }
            }
        })
    }

    /// `√2 |√φ₁ − √φ₀|`, a lower bound for [`HeisenbergSoliton::distance`].
    pub fn distance_lower_bound(phi0: f64, phi1: f64) -> f64 {
        2f64.sqrt() * (phi1.sqrt() - phi0.sqrt()).abs()
    }

    /// Signed time for the flow of `∇f/|∇f|²` to move `φ₀` to `to`,
    /// `∫ φ^{n−1}/F_n dφ`.
    pub fn gradient_flow_time(&self, phi0: f64, to: PhiEnd) -> Result<Growth, HeisenbergError> {
        let n = self.n;
        let g = move |phi: f64| phi.powi(n as i32 - 1) / special::f(n, phi).unwrap_or(f64::NAN);
        self.integral(g, phi0, to, 1e6)
    }

    /// Computes `(q_a, q_b)` for the normalization `q(φ₀) = q₀`.
    pub fn q_domain(&self, phi0: f64, q0: f64) -> Result<QDomain, HeisenbergError> {
        let n = self.n;
        let g = move |phi: f64| 1.0 / special::f(n, phi).unwrap_or(f64::NAN);
        let lower = self.integral(g, phi0, PhiEnd::Zero, 1e12)?;
        let upper = self.integral(g, phi0, PhiEnd::Infinity, 1e12)?;
        Ok(QDomain { qa: lower.value().map(|v| q0 + v), qb: upper.value().map(|v| q0 + v) })
    }

    /// Inverts `q(φ) = q₀ + ∫_{φ₀}^{φ} dφ̃/F_n(φ̃)` by bracketing followed by
    /// Newton steps (`dφ/dq = F_n`) safeguarded with bisection.
    pub fn phi_of_q(&self, phi0: f64, q0: f64, q: f64) -> Result<f64, HeisenbergError> {
        if q == q0 {
            return Ok(phi0);
        }
        let dom = self.q_domain(phi0, q0)?;
        if !dom.contains(q) {
            return Err(HeisenbergError::QOutsideDomain {
                q,
                qa: dom.qa.unwrap_or(f64::NEG_INFINITY),
                qb: dom.qb.unwrap_or(f64::INFINITY),
            });
        }
        let n = self.n;
        let inv = |phi: f64| 1.0 / special::f(n, phi).unwrap_or(f64::NAN);
        let quad = tight();
        let seg = |a: f64, b: f64| -> Result<f64, HeisenbergError> {
            let v = quad.integrate(inv, a.min(b), a.max(b))?.value;
            Ok(if b >= a { v } else { -v })
        };
        // (φ, q(φ) − q) at the bracket ends.
        let (mut lo, mut hi);
        if q > q0 {
            lo = (phi0, q0 - q);
            let mut x = phi0;
            let mut gx = q0 - q;
            loop {
                let nx = 2.0 * x;
                let ng = gx + seg(x, nx)?;
                if ng >= 0.0 {
                    hi = (nx, ng);
                    break;
                }
                lo = (nx, ng);
                x = nx;
                gx = ng;
                if !x.is_finite() {
                    return Err(HeisenbergError::NoRoot(q));
                }
            }
        } else {
            hi = (phi0, q0 - q);
            let mut x = phi0;
            let mut gx = q0 - q;
            loop {
                let nx = 0.5 * x;
                let ng = gx + seg(x, nx)?;
                if ng <= 0.0 {
                    lo = (nx, ng);
                    break;
                }
                hi = (nx, ng);
                x = nx;
                gx = ng;
                if x < 1e-300 {
                    return Err(HeisenbergError::NoRoot(q));
                }
            }
        }
        // Newton from the end with the smaller residual; each update integrates
        // only the short step from the current iterate.
        let (mut x, mut gx) = if lo.1.abs() < hi.1.abs() { lo } else { hi };
        for _ in 0..200 {
            if gx == 0.0 {
                return Ok(x);
            }
            let mut nx = x - gx * special::f(n, x)?;
            if !(nx > lo.0 && nx < hi.0) {
                nx = 0.5 * (lo.0 + hi.0);
            }
            let ng = gx + seg(x, nx)?;
            if ng < 0.0 {
                lo = (nx, ng);
            } else {
                hi = (nx, ng);
            }
            let step = (nx - x).abs();
            x = nx;
            gx = ng;
            if step <= 4.0 * f64::EPSILON * x || hi.0 - lo.0 <= 4.0 * f64::EPSILON * x {
                return Ok(x);
            }
        }
        Err(HeisenbergError::NoRoot(q))
    }
}

/// Outcome of the curvature sweep behind the type-III claim.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypeReport {
    pub n: u32,
    pub sup_abs_sec: f64,
    /// Largest frame sectional curvature seen; negative means all frame
    /// planes are negatively curved.
    pub max_frame_sec: f64,
    pub verdict: &'static str,
    /// `2/(m+1)`, the conjectured sharp bound; reported, not asserted.
    pub conjectured_bound: f64,
    pub within_conjecture: bool,
    pub planes_sampled: usize,
}

fn random_orthonormal_pair(rng: &mut ChaCha8Rng, dim: usize) -> (Vec<f64>, Vec<f64>) {
    loop {
        let mut x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut y: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if nx < 1e-3 {
            continue;
        }
        x.iter_mut().for_each(|v| *v /= nx);
        let d: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        y.iter_mut().zip(&x).for_each(|(b, a)| *b -= d * a);
        let ny = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if ny < 1e-3 {
            continue;
        }
        y.iter_mut().for_each(|v| *v /= ny);
        return (x, y);
    }
}

/// Supremum of `|Sec|` over frame planes and sampled planes on the grid.
///
/// For `n = 1` planes are the decomposable-form parametrization; otherwise
/// random orthonormal pairs run through the full Riemann tensor of the frame.
pub fn type_check(
    s: &HeisenbergSoliton,
    phi_grid: &[f64],
    samples: usize,
    seed: u64,
) -> Result<TypeReport, HeisenbergError> {
    let mut max_frame: f64 = f64::NEG_INFINITY;
    let mut sup: f64 = 0.0;
    let mut planes = 0;
    for &phi in phi_grid {
        let c = s.curvatures(phi)?;
        for v in c.sec_xy.iter().chain(&c.sec_kx).chain(std::iter::once(&c.sec_kt)) {
            max_frame = max_frame.max(*v);
            sup = sup.max(v.abs());
            planes += 1;
        }
    }
    if s.n == 1 {
        let e = sec_extremes_dim4(phi_grid, samples, seed)?;
        sup = sup.max(e.inf.abs()).max(e.sup.abs());
        planes += e.samples;
    } else {
        let fs = s.frame();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for &phi in phi_grid {
            let p = fs.point(phi)?;
            let (_, rm) = point_curvature(&p);
            for _ in 0..samples {
                let (x, y) = random_orthonormal_pair(&mut rng, p.dim());
                sup = sup.max(rm.sectional(&x, &y).abs());
                planes += 1;
            }
        }
    }
    let bound = 2.0 / (s.m() as f64 + 1.0);
    Ok(TypeReport {
        n: s.n,
        sup_abs_sec: sup,
        max_frame_sec: max_frame,
        verdict: if sup.is_finite() { "bounded" } else { "unbounded" },
        conjectured_bound: bound,
        within_conjecture: sup <= bound,
        planes_sampled: planes,
    })
}
