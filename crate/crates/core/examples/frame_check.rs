//! Every residual of the frame engine on a frame document.
//!
//! `cargo run --example frame_check -- crates/core/data/violates_rels2.json`

use solab::frame::check_point;
use solab::frame::spec::FrameSpec;

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/heisenberg_frame.json").to_string());
    let loaded = FrameSpec::load(path.as_ref()).expect("readable frame document").build().expect("valid frame");
    println!("{path}");
    println!("{:>10} {:>10} {:>10} {:>10} {:>10} {:>10}", "s", "kahler", "jacobi", "ricci", "skew", "identity3");
    for &s in loaded.default_grid.iter().step_by((loaded.default_grid.len() / 10).max(1)) {
        let c = check_point(&loaded.frame.point(s).expect("point"));
        let (skew, id3) = c.soliton.as_ref().map_or((f64::NAN, f64::NAN), |r| (r.skew, r.identity3));
        println!(
            "{s:>10.4} {:>10.2e} {:>10.2e} {:>10.2e} {skew:>10.2e} {id3:>10.2e}",
            c.kahler.max(),
            c.jacobi,
            c.curvature.ricci_disagreement
        );
    }
}
