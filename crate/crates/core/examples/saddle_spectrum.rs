//! Saddle connections on the marked torus and the octagon, and the spread
//! of their directions.
use conesurf::corpus;
use conesurf::saddles::{direction_spectrum, enumerate_saddles, DEFAULT_UNFOLDING_BUDGET};

fn main() {
    let t = corpus::marked_torus();
    for l in [1.5, 5.0, 10.0] {
        let list = enumerate_saddles(&t, None, l, DEFAULT_UNFOLDING_BUDGET).unwrap();
        let sp = direction_spectrum(&t, l, DEFAULT_UNFOLDING_BUDGET).unwrap();
        println!("marked torus L={l}: {} connections, largest direction gap {:.4}", list.len(), sp.max_gap);
    }
    let o = corpus::octagon();
    let list = enumerate_saddles(&o, None, 2.0, DEFAULT_UNFOLDING_BUDGET).unwrap();
    println!("octagon L=2: {} connections", list.len());
    for c in list.iter().take(6) {
        println!("  length {:.6}  holonomy ({:.6}, {:.6})", c.length, c.holonomy.x, c.holonomy.y);
    }
}
