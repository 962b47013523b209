//! The four-dimensional curvature operator and the sweep for sharp bounds
//! on the sectional curvature.

use solab::heisenberg::{dim4_operator, sec_extremes_dim4};
use solab::numerics::logspace;

fn main() {
    for phi in [0.1, 1.0, 10.0] {
        let op = dim4_operator(phi).expect("identity holds");
        println!("phi = {phi}: eigenvalues {:.6?}", op.eigenvalues);
        println!("  p² − 2pr − q² = {:.12e}, closed form {:.12e}", op.determinant, op.determinant_closed);
    }
    let ex = sec_extremes_dim4(&logspace(1e-3, 1e3, 60), 100_000, 0).expect("sweep");
    println!("Sec over {} samples lies in [{:.6}, {:.3e}]", ex.samples, ex.inf, ex.sup);
    println!("inf at (phi, a1, b1) = {:.4?}, sup at {:.4?}", ex.argmin, ex.argmax);
}
