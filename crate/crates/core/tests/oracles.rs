//! Library values against independent computations: exact rational series,
//! brute-force quadrature, closed forms in `e`, and a fixed-step integrator
//! in a different variable.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use solab::e2::{shoot_unstable, EpsilonProfile, ShootSettings};
use solab::heisenberg::{big_f, dim4_operator, f_prime, HeisenbergSoliton};
use solab::steady::SteadyII;

fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `F_n(p/q)` from `2(−1)ⁿ(n+1)!/φ · Σ_{k≥n+2} (−φ)^k/k!` in exact
/// arithmetic, truncated past the peak once terms fall below 1e−40 of the sum.
fn f_exact(n: u32, num: i64, den: i64) -> f64 {
    let phi = rational(num, den);
    let mut fact = BigRational::one();
    for k in 1..=(n + 2) {
        fact *= rational(k as i64, 1);
    }
    let mut term = {
        let mut p = BigRational::one();
        for _ in 0..(n + 2) {
            p *= -phi.clone();
        }
        p / fact
    };
    let mut sum = BigRational::zero();
    let tiny = rational(1, 1) / BigRational::from_integer(BigInt::from(10).pow(40));
    let phi_f = num as f64 / den as f64;
    let mut k = n + 2;
    loop {
        sum += term.clone();
        k += 1;
        term = term * (-phi.clone()) / rational(k as i64, 1);
        if (k as f64) > phi_f && term.abs() < sum.abs() * tiny.clone() {
            break;
        }
    }
    let mut n1 = BigRational::one();
    for j in 1..=(n + 1) {
        n1 *= rational(j as i64, 1);
    }
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    let value = rational(2 * sign, 1) * n1 * sum / phi;
    value.to_f64().unwrap()
}

fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, panels: usize) -> f64 {
    let h = (hi - lo) / panels as f64;
    let mut s = f(lo) + f(hi);
    for k in 1..panels {
        let x = lo + k as f64 * h;
        s += if k % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
    }
    s * h / 3.0
}

#[test]
fn f_against_exact_rational_series() {
    let points: [(i64, i64); 10] =
        [(1, 1_000_000), (1, 1000), (1, 10), (1, 2), (1, 1), (2, 1), (7, 2), (7, 1), (20, 1), (50, 1)];
    for n in 1..=5 {
        for &(p, q) in &points {
            let phi = p as f64 / q as f64;
            let exact = f_exact(n, p, q);
            let got = big_f(n, phi).unwrap();
            assert!((got - exact).abs() <= 1e-13 * exact, "n={n} phi={phi}: {got} vs {exact}");
        }
    }
}

#[test]
fn f_against_integral_representation() {
    // (φe^φF)′ = 2φ^{n+1}e^φ, so F = (2/φ) ∫₀^φ x^{n+1} e^{x−φ} dx.
    for n in 1..=3 {
        for &phi in &[0.5, 1.0, 5.0, 20.0] {
            let integral = simpson(|x: f64| x.powi(n as i32 + 1) * (x - phi).exp(), 0.0, phi, 1_000_000);
            let oracle = 2.0 / phi * integral;
            let got = big_f(n, phi).unwrap();
            assert!((got - oracle).abs() <= 1e-10 * oracle, "n={n} phi={phi}: {got} vs {oracle}");
        }
    }
}

#[test]
fn f_prime_against_difference_of_exact_values() {
    // Central difference of the exact series at φ = 1 ± 1/1000.
    for n in 1..=4 {
        let fd = (f_exact(n, 1001, 1000) - f_exact(n, 999, 1000)) / 2e-3;
        let got = f_prime(n, 1.0).unwrap();
        assert!((got - fd).abs() < 1e-5, "n={n}: {got} vs {fd}");
    }
}

#[test]
fn f_at_one_is_two_minus_four_over_e() {
    let e = std::f64::consts::E;
    let got = big_f(1, 1.0).unwrap();
    assert!((got - (2.0 - 4.0 / e)).abs() < 1e-15);
    assert!((got - 0.5284822353142307).abs() < 1e-15);
}

#[test]
fn curvature_triple_at_phi_one() {
    // With F₁(1) = 2 − 4/e: Sec(x,y) = −F, Sec(k,x) = 1 − 3/e, Sec(k,t) = 10/e − 4.
    let e = std::f64::consts::E;
    let c = HeisenbergSoliton::new(1).unwrap().curvatures(1.0).unwrap();
    let expect = [4.0 / e - 2.0, 1.0 - 3.0 / e, 10.0 / e - 4.0];
    let got = [c.sec_xy[0], c.sec_kx[0], c.sec_kt];
    for (g, x) in got.iter().zip(expect) {
        assert!((g - x).abs() < 1e-14, "{got:?} vs {expect:?}");
    }
    for (g, x) in got.iter().zip([-0.5284822, -0.1036383, -0.3212056]) {
        assert!((g - x).abs() < 1e-6);
    }
}

#[test]
fn determinant_against_direct_closed_form() {
    for &phi in &[0.1f64, 1.0, 10.0] {
        let op = dim4_operator(phi).unwrap();
        let direct = 4.0 / (phi.powi(4) * phi.exp()) * (2.0 * phi.cosh() - 2.0 - phi * phi);
        assert!((op.determinant - direct).abs() < 1e-10 * direct.abs().max(1.0), "phi={phi}");
    }
}

#[test]
fn steady_value_and_length() {
    let p = SteadyII::new(1.0, 1.0, 1.0, -1.0);
    let c = p.c_of_t(-1.0).unwrap();
    assert!((c - (1.0 - (-1f64).exp()).powf(-0.5)).abs() < 1e-15);
    assert!((c - 1.2577665549971213).abs() < 1e-15);
    let rec = p.normal_geodesic_length(-5.0, -0.01).unwrap();
    let oracle = simpson(|t| p.c_of_t(t).unwrap(), -5.0, -0.01, 1_000_000);
    assert!((rec.closed_form - oracle).abs() < 1e-9, "{} vs {oracle}", rec.closed_form);
    // Length to the boundary t = 0 from t = −1: Lc(−1) = 2 atanh(√(1 − e^{−1})).
    let lim = 2.0 * (1.0 - (-1f64).exp()).sqrt().atanh();
    let v = p.incompleteness_verdict().unwrap();
    assert!((v.upper.length.unwrap() - lim).abs() < 1e-12);
}

/// RK4 in `u = ln b` with `a(u), c(u)`; shares nothing with the adaptive
/// solver but the equations.
fn rk4_graph(q: f64, delta: f64, eps: &EpsilonProfile, b_stop: &[f64]) -> Vec<(f64, f64)> {
    let rhs = |u: f64, a: f64, c: f64| {
        let b = u.exp();
        let (a2, c2) = (a * a, c * c);
        let s = a2 + c2;
        (a * (c2 - a2) / s, c * (a2 - c2 + 2.0 * a2 * b * b + 2.0 * eps.eval(b) * a2) / s)
    };
    let h: f64 = 1e-3;
    let (mut u, mut a, mut c) = ((delta * q).ln(), q, q);
    let mut out = Vec::new();
    for &target in b_stop {
        let ut = target.ln();
        while u < ut {
            let step = h.min(ut - u);
            let (k1a, k1c) = rhs(u, a, c);
            let (k2a, k2c) = rhs(u + step / 2.0, a + step / 2.0 * k1a, c + step / 2.0 * k1c);
            let (k3a, k3c) = rhs(u + step / 2.0, a + step / 2.0 * k2a, c + step / 2.0 * k2c);
            let (k4a, k4c) = rhs(u + step, a + step * k3a, c + step * k3c);
            a += step / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
            c += step / 6.0 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c);
            u += step;
        }
        out.push((a, c));
    }
    out
}

#[test]
fn unstable_curve_against_rk4_in_log_b() {
    let stops = [1e-3, 0.1, 1.0, 3.0, 10.0];
    for eps in [EpsilonProfile::Zero, EpsilonProfile::QuadraticBump] {
        for q in [0.5, 1.0] {
            let t = shoot_unstable(q, &eps, &ShootSettings::default()).unwrap();
            let oracle = rk4_graph(q, 1e-8, &eps, &stops);
            for (&b, &(a, c)) in stops.iter().zip(&oracle) {
                let (_, y) = t.at_b(b).unwrap();
                let err = ((y[0] - a) / a).abs().max(((y[2] - c) / c).abs());
                assert!(err < 1e-8, "{} q={q} b={b}: ({}, {}) vs ({a}, {c})", eps.name(), y[0], y[2]);
            }
        }
    }
}
