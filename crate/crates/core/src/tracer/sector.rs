use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::geom::{wrap, Vec2};
use crate::surface::{ConeSurface, SurfaceError};

/// Outgoing directions that continue a geodesic through a cone point.
///
/// Angles are cone coordinates of the vertex class. `incoming` is the
/// coordinate of the ray pointing back along the arriving geodesic; the
/// allowed outgoing coordinates are `start + [0, width]` (mod the cone angle),
/// which keeps both side angles at least pi.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuationSector {
    pub class: usize,
    pub cone_angle: f64,
    pub incoming: f64,
    pub start: f64,
    pub width: f64,
}

impl ContinuationSector {
    pub fn is_empty(&self) -> bool {
        self.width <= 0.0
    }

    /// Coordinate of the symmetric continuation (both side angles equal).
    pub fn center(&self) -> f64 {
        wrap(self.start + 0.5 * self.width, self.cone_angle)
    }

    pub fn contains(&self, outgoing: f64, tol: f64) -> bool {
        if self.is_empty() {
            return false;
        }
        let rel = wrap(outgoing - self.start + tol, self.cone_angle);
        rel <= self.width + 2.0 * tol
    }

    /// The allowed interval as `(lo, hi)` with `hi` possibly beyond the cone angle.
    pub fn interval(&self) -> Option<(f64, f64)> {
        (!self.is_empty()).then_some((self.start, self.start + self.width))
    }
}

pub fn sector_width(theta: f64) -> f64 {
    if theta > TAU {
        theta - TAU
    } else {
        0.0
    }
}

/// Continuation sector for a geodesic arriving at `class` whose backward
/// ray has cone coordinate `incoming`.
pub fn continuation_sector(surface: &ConeSurface, class: usize, incoming: f64) -> Result<ContinuationSector, SurfaceError> {
    let theta = surface.cone_angle(class)?;
    let incoming = wrap(incoming, theta);
    Ok(ContinuationSector {
        class,
        cone_angle: theta,
        incoming,
        start: wrap(incoming + PI, theta),
        width: sector_width(theta),
    })
}

/// Same as [`continuation_sector`] with the arrival given as a chart
/// direction of travel into corner `(chart, vertex)`.
pub fn continuation_sector_for_arrival(
    surface: &ConeSurface,
    chart: usize,
    vertex: usize,
    travel: Vec2,
) -> Result<ContinuationSector, SurfaceError> {
    let class = surface.class_of(chart, vertex);
    let incoming = surface.cone_coordinate(chart, vertex, -travel);
    continuation_sector(surface, class, incoming)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn widths() {
        let oct = corpus::octagon();
        let s = continuation_sector(&oct, 0, 0.3).unwrap();
        assert_eq!(s.width, 4.0 * PI);
        assert_eq!(sector_width(2.5 * PI), 2.5 * PI - TAU);
        let pc = corpus::pillowcase();
        assert!(continuation_sector(&pc, 0, 0.0).unwrap().is_empty());
        assert!(matches!(continuation_sector(&pc, 9, 0.0), Err(SurfaceError::UnknownVertexClass(9))));
    }

    #[test]
    fn sector_keeps_side_angles_at_least_pi() {
        let oct = corpus::octagon();
        let theta = 6.0 * PI;
        for k in 0..50 {
            let incoming = 0.37 * k as f64;
            let s = continuation_sector(&oct, 0, incoming).unwrap();
            for j in 0..=20 {
                let out = s.start + s.width * j as f64 / 20.0;
                let (l, r) = crate::surface::side_angles(theta, s.incoming, out);
                assert!(l >= PI - 1e-9 && r >= PI - 1e-9);
                assert!(s.contains(out, 1e-12));
            }
            assert!(!s.contains(s.incoming + 0.5, 1e-12));
        }
    }
}
