//! Smoothness of the E(2) metric where the circle collapses.

use solab::e2::{bolt_smoothness, shoot_unstable, EpsilonProfile, ShootSettings};

fn main() {
    let t = shoot_unstable(1.0, &EpsilonProfile::Zero, &ShootSettings::default()).unwrap();
    let r = bolt_smoothness(&t).unwrap();
    println!("db/dr at r = 1e-4: {:.10} (secant {:.10})", r.db_dr, r.db_dr_secant);
    println!("(a² − c²)/r²: {:?}", r.quadratic);
    println!("(cr − ab)/r³ drift per decade: {:.2e}", r.cubic_drift_per_decade);
    println!("smooth: {}", r.pass);
}
