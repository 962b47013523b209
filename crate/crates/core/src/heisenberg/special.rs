//! The profile function
//!
//! ```text
//! F_n(φ) = 2(−1)^{n+1}(n+1)!/φ · [Σ_{k=0}^{n+1} (−φ)^k/k! − e^{−φ}]
//! ```
//!
//! and its first two derivatives. The bracket is the negated tail of the
//! exponential series, so for small φ the direct formula cancels away
//! roughly (n+2)·log10(1/φ) digits. Below `θ_n = 1 + n/2` the tail series is
//! summed instead:
//!
//! ```text
//! F_n(φ) = 2φ^{n+1} Σ_j s_j,   s_0 = 1/(n+2),   s_{j+1} = −s_j·φ/(n+3+j)
//! ```

use super::HeisenbergError;

/// Largest supported `n`; `(n+1)!` stays exact in `u64`.
pub const MAX_N: u32 = 18;

/// Switch point between the tail series and the direct formula.
pub fn theta(n: u32) -> f64 {
    1.0 + n as f64 / 2.0
}

fn factorial(k: u32) -> u64 {
    (1..=k as u64).product()
}

fn check(n: u32, phi: f64) -> Result<(), HeisenbergError> {
    if n > MAX_N {
        return Err(HeisenbergError::NTooLarge(n));
    }
    if !(phi > 0.0) || !phi.is_finite() {
        return Err(HeisenbergError::PhiNonPositive(phi));
    }
    Ok(())
}

/// `(Σ s_j φ^j, Σ (n+1+j) s_j φ^j, Σ (n+1+j)(n+j) s_j φ^j)`, truncated once
/// terms drop below 1e−18 of the running sums.
fn tail_sums(n: u32, phi: f64) -> (f64, f64, f64) {
    let n = n as f64;
    let mut term = 1.0 / (n + 2.0);
    let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
    for j in 0..400 {
        let jf = j as f64;
        let k = n + 1.0 + jf;
        s0 += term;
        s1 += k * term;
        s2 += k * (k - 1.0) * term;
        if term.abs() * k * k < 1e-18 * s0.abs() {
            break;
        }
        term *= -phi / (n + 3.0 + jf);
    }
    (s0, s1, s2)
}

fn direct(n: u32, phi: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 0..=(n + 1) {
        if k > 0 {
            term *= -phi / k as f64;
        }
        sum += term;
    }
    let sign = if (n + 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    2.0 * sign * factorial(n + 1) as f64 / phi * (sum - (-phi).exp())
}

/// `F_n(φ)`, positive for every `φ > 0`.
pub fn f(n: u32, phi: f64) -> Result<f64, HeisenbergError> {
    check(n, phi)?;
    if phi < theta(n) {
        let (s0, _, _) = tail_sums(n, phi);
        Ok(2.0 * phi.powi(n as i32 + 1) * s0)
    } else {
        Ok(direct(n, phi))
    }
}

/// `F_n′(φ) = −((φ+1)/φ)F_n + 2φⁿ`; the series is differentiated term by term
/// below `θ_n`.
pub fn f_prime(n: u32, phi: f64) -> Result<f64, HeisenbergError> {
    check(n, phi)?;
    if phi < theta(n) {
        let (_, s1, _) = tail_sums(n, phi);
        Ok(2.0 * phi.powi(n as i32) * s1)
    } else {
        let fv = direct(n, phi);
        Ok(-(phi + 1.0) / phi * fv + 2.0 * phi.powi(n as i32))
    }
}

/// `F_n″(φ) = F_n/φ² − ((φ+1)/φ)F_n′ + 2nφ^{n−1}`.
pub fn f_second(n: u32, phi: f64) -> Result<f64, HeisenbergError> {
    check(n, phi)?;
    if phi < theta(n) {
        let (_, _, s2) = tail_sums(n, phi);
        Ok(2.0 * phi.powi(n as i32 - 1) * s2)
    } else {
        let fv = direct(n, phi);
        let fp = -(phi + 1.0) / phi * fv + 2.0 * phi.powi(n as i32);
        Ok(fv / (phi * phi) - (phi + 1.0) / phi * fp + 2.0 * n as f64 * phi.powi(n as i32 - 1))
    }
}

/// The defining formula evaluated naively in double precision, for
/// demonstrating the cancellation the series avoids.
pub fn f_naive(n: u32, phi: f64) -> f64 {
    direct(n, phi)
}

/// Relative residual of `F_n + (n+1)F_{n−1} − 2φⁿ`, scaled by the largest term.
pub fn recursion_residual(n: u32, phi: f64) -> Result<f64, HeisenbergError> {
    if n == 0 {
        return Err(HeisenbergError::NTooLarge(0));
    }
    let a = f(n, phi)?;
    let b = (n + 1) as f64 * f(n - 1, phi)?;
    let c = 2.0 * phi.powi(n as i32);
    Ok((a + b - c).abs() / a.abs().max(b.abs()).max(c.abs()))
}

/// Relative residual of `F_n′ = (n+1)F_{n−1} − F_n/φ`.
pub fn derivative_relation_residual(n: u32, phi: f64) -> Result<f64, HeisenbergError> {
    if n == 0 {
        return Err(HeisenbergError::NTooLarge(0));
    }
    let lhs = f_prime(n, phi)?;
    let a = (n + 1) as f64 * f(n - 1, phi)?;
    let b = f(n, phi)? / phi;
    Ok((lhs - a + b).abs() / lhs.abs().max(a.abs()).max(b.abs()))
}
