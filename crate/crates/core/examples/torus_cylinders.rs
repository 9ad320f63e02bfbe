//! Cylinders around closed geodesics: the (p,q) cylinders of the marked
//! torus, the horizontal octagon cylinder, and offset re-closure.
use conesurf::corpus;
use conesurf::cylinders::{check_offsets, find_closed_geodesic, strip_quadrangle, ClosedSeed, SearchBudget};
use conesurf::saddles::{enumerate_saddles, DEFAULT_UNFOLDING_BUDGET};
use conesurf::Vec2;

fn main() {
    let t = corpus::marked_torus();
    let list = enumerate_saddles(&t, Some(0), 5.0, DEFAULT_UNFOLDING_BUDGET).unwrap();
    for (p, q) in [(1.0, 0.0), (1.0, 1.0), (2.0, 1.0), (3.0, 2.0)] {
        let sc = list.iter().find(|c| c.holonomy.dist(Vec2::new(p, q)) < 1e-9).unwrap();
        let c = find_closed_geodesic(&t, ClosedSeed::Saddle(sc), SearchBudget::default()).unwrap();
        println!(
            "({p},{q}): circumference {:.6}  d_L + d_R = {:.9}  expected {:.9}",
            c.circumference,
            c.total_width().unwrap(),
            1.0 / (p * p + q * q).sqrt()
        );
    }
    let o = corpus::octagon();
    let seed = ClosedSeed::Direction { chart: 0, point: Vec2::new(0.0, 0.0), direction: Vec2::new(1.0, 0.0) };
    let c = find_closed_geodesic(&o, seed, SearchBudget::default()).unwrap();
    println!("octagon horizontal: circumference {:.6}  widths {:?} {:?}", c.circumference, c.width_left, c.width_right);
    for off in check_offsets(&o, &c, &[0.25, 0.5, 0.75]).unwrap() {
        println!("  offset {:+.4}: closes with circumference {:?}", off.offset, off.circumference);
    }
    let q = strip_quadrangle(1.0, 2.0, std::f64::consts::PI / 6.0).unwrap();
    println!("quadrangle eps=1 delta=2 theta=pi/6: width {:.6} length {:.6}", q.width, q.length);
}
