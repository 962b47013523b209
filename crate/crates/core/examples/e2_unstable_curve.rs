//! Shooting along the unstable curve of the E(2) equilibrium and the
//! distance estimates along it.

use solab::e2::{distance_profile, monitors, shoot_unstable, skew_soliton_residual, EpsilonProfile, ShootSettings};

fn main() {
    for eps in [EpsilonProfile::Zero, EpsilonProfile::QuadraticBump] {
        let t = shoot_unstable(1.0, &eps, &ShootSettings::default()).expect("shooting");
        println!("epsilon = {}: {}", eps.name(), t.classification.as_str());
        for b in [1e-3, 1.0, 10.0, 100.0, 1000.0] {
            let (_, y) = t.at_b(b).expect("b reached");
            println!("  b = {b:>7}: t = {:>9.5} a = {:.6} c = {:.6} r = {:.6}", y[5], y[0], y[2], y[4]);
        }
        println!("  lemma identities {:.2e}, region {:.2e}", t.lemma_max(), t.monitor_max(monitors::REGION));
        println!("  skew-soliton residual {:.2e}", skew_soliton_residual(&t, 50).unwrap());
        let d = distance_profile(&t).unwrap();
        println!("  length b ∈ [10, 100] = {:.5} ≥ K₂ ln 10 = {:.5}; K₁ = {:.4}", d.length_10_100, d.minorant, d.k1);
    }
}
