//! Backward classification of Cauchy data and the fitted blow-up rate.

use solab::e2::{classify_cauchy, E2State, EpsilonProfile};
use solab::numerics::IvpSolver;

fn main() {
    let solver = IvpSolver { abs_tol: 1e-14, rel_tol: 1e-11, ..Default::default() };
    for (a, b, c) in [(2.0, 1.0, 1.0), (1.0, 1.0, 3.0), (1.0, 0.5, 1.1)] {
        let t = classify_cauchy(&E2State { a, b, c, f: 0.0, t: 0.0 }, &EpsilonProfile::Zero, &solver).unwrap();
        print!("({a}, {b}, {c}): {}", t.classification.as_str());
        if let Some(bu) = &t.blow_up {
            print!(", {} ~ (t − {:.6})^{:.4}", bu.variable, bu.xi, bu.exponent);
        }
        println!();
    }
}
