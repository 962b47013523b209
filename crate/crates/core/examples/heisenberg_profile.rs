//! F_n and the curvature of the Heisenberg solitons across scales.

use solab::heisenberg::{big_f, HeisenbergSoliton};
use solab::numerics::logspace;

fn main() {
    for n in 1..=3 {
        let s = HeisenbergSoliton::new(n).expect("n in range");
        println!("n = {n} (complex dimension {})", s.m());
        println!("{:>10} {:>14} {:>11} {:>11} {:>11} {:>11}", "phi", "F", "Sec(x,y)", "Sec(k,x)", "Sec(k,t)", "Scal");
        for phi in logspace(1e-3, 1e3, 7) {
            let c = s.curvatures(phi).expect("phi > 0");
            println!(
                "{phi:>10.3e} {:>14.6e} {:>11.6} {:>11.6} {:>11.6} {:>11.6}",
                big_f(n, phi).unwrap(),
                c.sec_xy[0],
                c.sec_kx[0],
                c.sec_kt,
                c.scalar
            );
        }
        println!();
    }
}
