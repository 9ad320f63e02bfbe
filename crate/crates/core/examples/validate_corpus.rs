//! Load every bundled surface and print its vertex classes.
use conesurf::corpus;
use std::f64::consts::PI;

fn main() {
    for (name, s) in corpus::named() {
        let gb = s.validate_gauss_bonnet();
        println!("{name}: {} charts, chi = {}, gauss-bonnet residual {:.1e}", s.charts.len(), s.euler_characteristic, gb.residual);
        for c in &s.vertex_classes {
            println!("  class {}  angle {:.4} pi  {:?}  singular {}", c.id, c.angle / PI, c.kind, c.singular);
        }
    }
}
