//! A geodesic passing a cone point of angle pi/2 crosses itself; compare the
//! traced crossing with the closed-form prediction.
use conesurf::tracer::{predict_self_intersection, self_intersections};
use conesurf::{corpus, trace, GeodesicState, TraceOptions, Vec2};
use std::f64::consts::{FRAC_PI_2, SQRT_2};

fn main() {
    let s = corpus::quarter_cone();
    // passes the apex at the origin at distance 1 after arclength 1.5
    let start = GeodesicState::new(0, Vec2::new(0.5 / SQRT_2, 2.5 / SQRT_2), Vec2::new(-1.0, -1.0));
    let r = trace(&s, start, TraceOptions::new(3.0)).unwrap();
    let p = predict_self_intersection(1.0, FRAC_PI_2).unwrap();
    println!("predicted: parameters 1.5 -+ {:.6}, distance {:.6} from the apex", p.t_prime, p.t);
    for x in self_intersections(&r, 1e-9, 1e-6) {
        println!("traced: arclengths {:.6} and {:.6} at ({:.6}, {:.6}), distance {:.6}", x.first, x.second, x.point.x, x.point.y, x.point.norm());
    }
}
