//! Distances along the φ-line and gradient-flow times toward both ends.

use solab::heisenberg::{HeisenbergSoliton, PhiEnd};

fn main() {
    let s = HeisenbergSoliton::new(1).unwrap();
    let d = s.distance(1.0, PhiEnd::At(4.0)).unwrap();
    println!("d(1, 4) = {:?}, lower bound {}", d, HeisenbergSoliton::distance_lower_bound(1.0, 4.0));
    for end in [PhiEnd::Zero, PhiEnd::Infinity] {
        println!("distance toward {end:?}: {:?}", s.distance(1.0, end).unwrap());
        println!("flow time toward {end:?}: {:?}", s.gradient_flow_time(1.0, end).unwrap());
    }
    let dom = s.q_domain(1.0, 0.0).unwrap();
    println!("q ranges over {dom:?}; phi(q = 2) = {}", s.phi_of_q(1.0, 0.0, 2.0).unwrap());
}
