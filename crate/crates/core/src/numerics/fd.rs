//! Central finite differences.

/// Central-difference derivative of `f` at `x` with step `h`.
///
/// * order 1: `(f(x+h) − f(x−h)) / 2h`
/// * order 2: `(f(x+h) − 2f(x) + f(x−h)) / h²`
///
/// Both stencils have truncation error O(h²). Any other order returns NaN.
pub fn fd_derivative<F: Fn(f64) -> f64>(f: F, x: f64, order: u8, h: f64) -> f64 {
    match order {
        1 => (f(x + h) - f(x - h)) / (2.0 * h),
        2 => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
        _ => f64::NAN,
    }
}

/// Central-difference Jacobian, one column per coordinate.
pub fn fd_jacobian<F: Fn(&[f64]) -> Vec<f64>>(f: F, x: &[f64], h: f64) -> Vec<Vec<f64>> {
    let n = x.len();
    let m = f(x).len();
    let mut jac = vec![vec![0.0; n]; m];
    let mut xp = x.to_vec();
    for j in 0..n {
        xp[j] = x[j] + h;
        let fp = f(&xp);
        xp[j] = x[j] - h;
        let fm = f(&xp);
        xp[j] = x[j];
        for i in 0..m {
            jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    jac
}
