//! Numerical verification toolkit for Kähler–Ricci solitons and skew-solitons
//! built from a τ-dependent orthonormal frame.
//!
//! * [`frame`]: the bracket ansatz, its connection and curvature, and the
//!   soliton residuals.
//! * [`heisenberg`]: the explicit expanding solitons on `ℝ × Heis_{2n+1}`.
//! * [`e2`]: the `E(2)` skew-solitons obtained by shooting from an equilibrium.
//! * [`steady`]: steady case-(II) metrics and their incompleteness.
//! * [`numerics`]: quadrature, an adaptive ODE integrator, finite differences.
//! * [`cli`]: the `solab` command line.

pub mod cli;
pub mod e2;
pub mod frame;
pub mod heisenberg;
pub mod numerics;
pub mod steady;

/// Tolerance at which residual checks are declared satisfied.
pub const DEFAULT_TOL: f64 = 1e-8;

/// [`DEFAULT_TOL`], or the value of `SOLAB_TOL` when it parses as a positive
/// number.
pub fn default_tolerance() -> f64 {
    std::env::var("SOLAB_TOL")
        .ok()
        .and_then(|v| v.trim().parse::<f64>().ok())
        .filter(|v| *v > 0.0 && v.is_finite())
        .unwrap_or(DEFAULT_TOL)
}
