//! What happens at cone points: the continuation sector is empty below 2pi
//! and has width theta - 2pi above it. A trace can be continued through the
//! octagon's 6pi point.
use conesurf::tracer::{continuation_sector, TraceEvent};
use conesurf::{corpus, trace, GeodesicState, TraceOptions, Vec2};
use std::f64::consts::PI;

fn main() {
    for (name, s) in corpus::named() {
        for c in &s.vertex_classes {
            let sec = continuation_sector(&s, c.id, 0.0).unwrap();
            println!("{name} class {}: angle {:.3} pi, sector width {:.3} pi", c.id, c.angle / PI, sec.width / PI);
        }
    }
    let s = corpus::octagon();
    // aimed straight at a vertex of the octagon
    let v = s.charts[0].vertex(0);
    let start = GeodesicState::new(0, Vec2::new(0.0, 0.0), v);
    let stop = trace(&s, start, TraceOptions::new(3.0)).unwrap();
    println!("stopping trace ends with {:?}", stop.events.last().map(|e| e.name()));
    let go = trace(&s, start, TraceOptions::new(3.0).stop_on_cone(false)).unwrap();
    for e in &go.events {
        if let TraceEvent::ConeHit { arclength, sector, continued: Some(p), .. } = e {
            println!("continued at arclength {arclength:.4}: outgoing {:.4}, sector [{:.4}, {:.4}]", p.outgoing, sector.start, sector.start + sector.width);
        }
    }
    println!("continued trace length {}", go.total_length);
}
