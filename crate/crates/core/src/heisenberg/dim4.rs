//! The curvature operator in real dimension four.
//!
//! On `Λ²` split into self-dual and anti-self-dual parts the operator has
//! two zero eigenvalues, two equal to `r = 2·Sec(k,x)`, and a 2×2 block
//! `[[p, q], [q, p − 2r]]` with
//! `p = ½(Sec(k,t)+Sec(x,y)) + 2Sec(k,x)`, `q = ½(Sec(k,t) − Sec(x,y))`.

use nalgebra::{Matrix6, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{HeisenbergError, HeisenbergSoliton};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dim4CurvatureOperator {
    pub phi: f64,
    pub p: f64,
    pub q_mix: f64,
    pub r: f64,
    /// Ascending.
    pub eigenvalues: [f64; 6],
    /// `p² − 2pr − q_mix²` from the curvatures.
    pub determinant: f64,
    /// `(4/(φ⁴e^φ))(2cosh φ − 2 − φ²)`.
    pub determinant_closed: f64,
}

impl Dim4CurvatureOperator {
    pub fn matrix(&self) -> Matrix6<f64> {
        let mut m = Matrix6::zeros();
        m[(0, 0)] = self.p;
        m[(0, 3)] = self.q_mix;
        m[(3, 0)] = self.q_mix;
        m[(3, 3)] = self.p - 2.0 * self.r;
        m[(4, 4)] = self.r;
        m[(5, 5)] = self.r;
        m
    }
}

/// `2cosh φ − 2 − φ²` without cancellation for small `φ`.
fn cosh_tail(phi: f64) -> f64 {
    if phi < 1.0 {
        let x2 = phi * phi;
        let mut term = x2 * x2 / 24.0;
        let mut sum: f64 = 0.0;
        let mut k = 2.0;
        while term > 1e-18 * sum.max(f64::MIN_POSITIVE) {
            sum += term;
            term *= x2 / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
            k += 1.0;
        }
        2.0 * sum
    } else {
        2.0 * phi.cosh() - 2.0 - phi * phi
    }
}

pub fn dim4_operator(phi: f64) -> Result<Dim4CurvatureOperator, HeisenbergError> {
    let c = HeisenbergSoliton { n: 1 }.curvatures(phi)?;
    let (kt, xy, kx) = (c.sec_kt, c.sec_xy[0], c.sec_kx[0]);
    let p = 0.5 * (kt + xy) + 2.0 * kx;
    let q_mix = 0.5 * (kt - xy);
    let r = 2.0 * kx;
    let determinant = p * p - 2.0 * p * r - q_mix * q_mix;
    let determinant_closed = if phi < 1.0 {
        4.0 / (phi.powi(4) * phi.exp()) * cosh_tail(phi)
    } else {
        // e^{−φ}(2cosh φ − 2 − φ²) = 1 + e^{−2φ} − (2 + φ²)e^{−φ}, finite for large φ.
        let e = (-phi).exp();
        4.0 / phi.powi(4) * (1.0 + e * e - (2.0 + phi * phi) * e)
    };
    let gap = (determinant - determinant_closed).abs();
    if !(gap <= 1e-10 * determinant_closed.abs().max(1.0)) {
        return Err(HeisenbergError::DeterminantIdentity(gap));
    }
    let mut op = Dim4CurvatureOperator { phi, p, q_mix, r, eigenvalues: [0.0; 6], determinant, determinant_closed };
    let eig = SymmetricEigen::new(op.matrix());
    let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    op.eigenvalues.copy_from_slice(&ev);
    Ok(op)
}

/// Sectional curvature of the unit decomposable form with parameters `(a₁, b₁)`.
pub fn sec_dim4(kt: f64, xy: f64, kx: f64, a1: f64, b1: f64) -> f64 {
    (a1 + b1).powi(2) / 2.0 * kt + (a1 - b1).powi(2) / 2.0 * xy + (1.0 + 2.0 * a1 * a1 - 4.0 * b1 * b1) * kx
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dim4Extremes {
    pub inf: f64,
    pub sup: f64,
    /// `(φ, a₁, b₁)` where the extremes were seen.
    pub argmin: [f64; 3],
    pub argmax: [f64; 3],
    pub samples: usize,
}

/// Sweeps `Sec(α)` over `(a₁,b₁) ∈ [−1/√2, 1/√2]²` (seeded uniform samples
/// plus the corners and centre) and over the `φ` grid.
pub fn sec_extremes_dim4(phi_grid: &[f64], samples: usize, seed: u64) -> Result<Dim4Extremes, HeisenbergError> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut forms: Vec<(f64, f64)> = vec![(0.0, 0.0), (h, h), (h, -h), (-h, h), (-h, -h)];
    forms.extend((0..samples).map(|_| (rng.gen_range(-h..=h), rng.gen_range(-h..=h))));
    let s = HeisenbergSoliton { n: 1 };
    let mut out = Dim4Extremes {
        inf: f64::INFINITY,
        sup: f64::NEG_INFINITY,
        argmin: [f64::NAN; 3],
        argmax: [f64::NAN; 3],
        samples: forms.len() * phi_grid.len(),
    };
    for &phi in phi_grid {
        let c = s.curvatures(phi)?;
        for &(a1, b1) in &forms {
            let v = sec_dim4(c.sec_kt, c.sec_xy[0], c.sec_kx[0], a1, b1);
            if v < out.inf {
                out.inf = v;
                out.argmin = [phi, a1, b1];
            }
            if v > out.sup {
                out.sup = v;
                out.argmax = [phi, a1, b1];
            }
        }
    }
    Ok(out)
}
