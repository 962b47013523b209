//! Steady case-(II) metrics: the closed-form profile, its length, and the
//! ends reached at finite distance.

use solab::steady::SteadyII;

fn main() {
    let p = SteadyII::new(1.0, 1.0, 1.0, -1.0);
    println!("interval {:?}; c(−1) = {}", p.interval(), p.c_of_t(-1.0).unwrap());
    let rec = p.normal_geodesic_length(-5.0, -0.01).unwrap();
    println!("length on [−5, −0.01]: closed form {} quadrature {}", rec.closed_form, rec.quadrature);
    for (k, beta, k1, k2) in [(1.0, 1.0, 1.0, -1.0), (-1.0, 2.0, -1.0, 1.0), (1.0, 1.0, 1.0, 1.0)] {
        let v = SteadyII::new(k, beta, k1, k2).incompleteness_verdict().unwrap();
        println!("(k, β, k₁, k₂) = ({k}, {beta}, {k1}, {k2}): {}", v.verdict);
        println!("  lower end {:?}, upper end {:?}", v.lower.length, v.upper.length);
    }
}
