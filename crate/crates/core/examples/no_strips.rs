//! Distance from a non-closed geodesic to the singular set shrinks with length.
use conesurf::tracer::min_distance_experiment;
use conesurf::{corpus, GeodesicState, Vec2};

fn main() {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let t = corpus::marked_torus();
    let r = min_distance_experiment(&t, GeodesicState::new(0, Vec2::new(0.3, 0.2), Vec2::new(1.0, phi)), &[10.0, 30.0, 100.0], 0.02).unwrap();
    println!("marked torus, golden slope: {:?}  below 0.02: {}", r.series, r.below_threshold);
    let o = corpus::octagon();
    let r = min_distance_experiment(&o, GeodesicState::new(0, Vec2::new(0.05, -0.1), Vec2::new(1.0, 5f64.sqrt() - 1.0)), &[100.0, 200.0, 500.0], 0.05).unwrap();
    println!("octagon: {:?}  below 0.05: {}", r.series, r.below_threshold);
}
