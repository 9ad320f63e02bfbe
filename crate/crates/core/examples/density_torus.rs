//! Closed geodesics approximating a golden-slope geodesic on the marked torus.
use conesurf::cylinders::{density_experiment, DensityConfig};
use conesurf::{corpus, trace, GeodesicState, TraceOptions, Vec2};

fn main() {
    let s = corpus::marked_torus();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let target = trace(&s, GeodesicState::new(0, Vec2::new(0.3, 0.2), Vec2::new(1.0, phi)), TraceOptions::new(12.0)).unwrap();
    let fib = [1.0f64, 1.0, 2.0, 3.0, 5.0, 8.0, 13.0, 21.0];
    let lengths: Vec<f64> = fib.windows(2).map(|w| w[0].hypot(w[1]) + 1e-6).collect();
    let r = density_experiment(&s, &target, &DensityConfig::new(lengths, 5.0, 0.05)).unwrap();
    for st in &r.steps {
        println!("L {:8.4}  best {:?} of length {:?}  distance {:?}", st.length_bound, st.kind, st.approximant_length, st.distance);
    }
    println!("strictly decreasing {}  pass {}", r.strictly_decreasing, r.pass);
}
