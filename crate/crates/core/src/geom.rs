//! Planar primitives: points, vectors and orientation-preserving isometries.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};

/// A point or displacement in a chart's Euclidean coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

pub type PlanarPoint = Vec2;

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn from_angle(a: f64) -> Self {
        Vec2::new(a.cos(), a.sin())
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3d cross product.
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn normalized(self) -> Option<Vec2> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(Vec2::new(self.x / n, self.y / n))
        } else {
            None
        }
    }

    /// Counterclockwise quarter turn.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn rotate(self, rot: Rotation) -> Vec2 {
        Vec2::new(rot.c * self.x - rot.s * self.y, rot.s * self.x + rot.c * self.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

/// Rotation stored as (cos, sin).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    pub c: f64,
    pub s: f64,
}

impl Rotation {
    pub const IDENTITY: Rotation = Rotation { c: 1.0, s: 0.0 };

    pub fn from_angle(a: f64) -> Self {
        Rotation { c: a.cos(), s: a.sin() }
    }

    /// Rotation taking unit direction `from` onto unit direction `to`.
    pub fn between(from: Vec2, to: Vec2) -> Self {
        let c = from.dot(to);
        let s = from.cross(to);
        let n = c.hypot(s);
        Rotation { c: c / n, s: s / n }
    }

    pub fn inverse(self) -> Self {
        Rotation { c: self.c, s: -self.s }
    }

    pub fn then(self, next: Rotation) -> Rotation {
        Rotation {
            c: next.c * self.c - next.s * self.s,
            s: next.s * self.c + next.c * self.s,
        }
    }

    pub fn angle(self) -> f64 {
        self.s.atan2(self.c)
    }
}

/// Orientation-preserving isometry `p -> R p + t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Isometry {
    pub rot: Rotation,
    pub shift: Vec2,
}

impl Default for Isometry {
    fn default() -> Self {
        Isometry::IDENTITY
    }
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry { rot: Rotation::IDENTITY, shift: Vec2::ZERO };

    pub fn new(rot: Rotation, shift: Vec2) -> Self {
        Isometry { rot, shift }
    }

    pub fn translation(shift: Vec2) -> Self {
        Isometry { rot: Rotation::IDENTITY, shift }
    }

    /// The unique direct isometry sending `p0 -> q0` and the direction of
    /// `p1 - p0` onto the direction of `q1 - q0`.
    pub fn from_segments(p0: Vec2, p1: Vec2, q0: Vec2, q1: Vec2) -> Self {
        let rot = Rotation::between(
            (p1 - p0).normalized().unwrap_or(Vec2::new(1.0, 0.0)),
            (q1 - q0).normalized().unwrap_or(Vec2::new(1.0, 0.0)),
        );
        Isometry { rot, shift: q0 - p0.rotate(rot) }
    }

    pub fn apply(&self, p: Vec2) -> Vec2 {
        p.rotate(self.rot) + self.shift
    }

    pub fn apply_vec(&self, v: Vec2) -> Vec2 {
        v.rotate(self.rot)
    }

    pub fn inverse(&self) -> Isometry {
        let r = self.rot.inverse();
        Isometry { rot: r, shift: (-self.shift).rotate(r) }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Isometry) -> Isometry {
        Isometry { rot: self.rot.then(next.rot), shift: next.apply(self.shift) }
    }
}

/// Reduce an angle into `[0, period)`.
pub fn wrap(a: f64, period: f64) -> f64 {
    let r = a.rem_euclid(period);
    if r >= period { 0.0 } else { r }
}

/// Counterclockwise angle from `a` to `b` in `[0, 2pi)`.
pub fn ccw_angle(a: Vec2, b: Vec2) -> f64 {
    wrap(a.cross(b).atan2(a.dot(b)), TAU)
}

/// Signed area (positive for counterclockwise polygons).
pub fn signed_area(pts: &[Vec2]) -> f64 {
    let n = pts.len();
    (0..n).map(|i| pts[i].cross(pts[(i + 1) % n])).sum::<f64>() * 0.5
}

/// Distance from `p` to the segment `[a, b]` together with the segment
/// parameter in `[0, 1]` of the closest point.
pub fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> (f64, f64) {
    let d = b - a;
    let l2 = d.norm_sq();
    let t = if l2 > 0.0 { ((p - a).dot(d) / l2).clamp(0.0, 1.0) } else { 0.0 };
    ((a + d * t).dist(p), t)
}

/// Intersection of closed segments `[a0,a1]` and `[b0,b1]` when they are not
/// parallel. Returns the parameters on each segment.
pub fn segment_intersection(a0: Vec2, a1: Vec2, b0: Vec2, b1: Vec2, tol: f64) -> Option<(f64, f64)> {
    let da = a1 - a0;
    let db = b1 - b0;
    let den = da.cross(db);
    if den.abs() <= f64::EPSILON * da.norm() * db.norm() {
        return None;
    }
    let w = b0 - a0;
    let s = w.cross(db) / den;
    let u = w.cross(da) / den;
    let ta = tol / da.norm().max(f64::MIN_POSITIVE);
    let tb = tol / db.norm().max(f64::MIN_POSITIVE);
    if s >= -ta && s <= 1.0 + ta && u >= -tb && u <= 1.0 + tb {
        Some((s.clamp(0.0, 1.0), u.clamp(0.0, 1.0)))
    } else {
        None
    }
}

fn proper_cross(a0: Vec2, a1: Vec2, b0: Vec2, b1: Vec2) -> bool {
    let d1 = (a1 - a0).cross(b0 - a0);
    let d2 = (a1 - a0).cross(b1 - a0);
    let d3 = (b1 - b0).cross(a0 - b0);
    let d4 = (b1 - b0).cross(a1 - b0);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// True when no two non-adjacent edges meet and no vertex is repeated.
pub fn is_simple(pts: &[Vec2], tol: f64) -> bool {
    let n = pts.len();
    for i in 0..n {
        for j in i + 1..n {
            if pts[i].dist(pts[j]) <= tol {
                return false;
            }
        }
    }
    for i in 0..n {
        let (a0, a1) = (pts[i], pts[(i + 1) % n]);
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                continue;
            }
            let (b0, b1) = (pts[j], pts[(j + 1) % n]);
            if proper_cross(a0, a1, b0, b1) {
                return false;
            }
            // touching contacts
            for &(p, s0, s1) in &[(b0, a0, a1), (b1, a0, a1), (a0, b0, b1), (a1, b0, b1)] {
                if point_segment_distance(p, s0, s1).0 <= tol {
                    return false;
                }
            }
        }
    }
    true
}

/// Closed point-in-polygon test with boundary tolerance.
pub fn contains_point(pts: &[Vec2], p: Vec2, tol: f64) -> bool {
    let n = pts.len();
    for i in 0..n {
        if point_segment_distance(p, pts[i], pts[(i + 1) % n]).0 <= tol {
            return true;
        }
    }
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

pub fn is_convex(pts: &[Vec2]) -> bool {
    let n = pts.len();
    (0..n).all(|i| {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        let c = pts[(i + 2) % n];
        (b - a).cross(c - b) > 0.0
    })
}

/// Clip a polygon against the half-plane `{p : n.p <= c}` (Sutherland-Hodgman step).
pub fn clip_half_plane(poly: &[Vec2], n: Vec2, c: f64) -> Vec<Vec2> {
    let mut out = Vec::with_capacity(poly.len() + 2);
    let m = poly.len();
    for i in 0..m {
        let p = poly[i];
        let q = poly[(i + 1) % m];
        let fp = n.dot(p) - c;
        let fq = n.dot(q) - c;
        if fp <= 0.0 {
            out.push(p);
        }
        if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
            let t = fp / (fp - fq);
            out.push(p + (q - p) * t);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn isometry_from_segments_maps_endpoints() {
        let iso = Isometry::from_segments(
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(2.0, 3.0),
            Vec2::new(2.0, 4.0),
        );
        let p = iso.apply(Vec2::new(1.0, 0.0));
        assert!(p.dist(Vec2::new(2.0, 4.0)) < 1e-15);
        assert!((iso.rot.angle() - FRAC_PI_2).abs() < 1e-15);
        let back = iso.inverse().apply(p);
        assert!(back.dist(Vec2::new(1.0, 0.0)) < 1e-15);
    }

    #[test]
    fn composition_order() {
        let a = Isometry::new(Rotation::from_angle(0.3), Vec2::new(1.0, 2.0));
        let b = Isometry::new(Rotation::from_angle(-1.1), Vec2::new(-0.5, 0.25));
        let p = Vec2::new(0.7, -0.2);
        let direct = b.apply(a.apply(p));
        assert!(a.then(&b).apply(p).dist(direct) < 1e-14);
    }

    #[test]
    fn simplicity_and_area() {
        let sq = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)];
        assert!(is_simple(&sq, 1e-9));
        assert!((signed_area(&sq) - 1.0).abs() < 1e-15);
        let bow = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        assert!(!is_simple(&bow, 1e-9));
    }

    #[test]
    fn clip_square() {
        let sq = [Vec2::new(0.0, 0.0), Vec2::new(2.0, 0.0), Vec2::new(2.0, 2.0), Vec2::new(0.0, 2.0)];
        let c = clip_half_plane(&sq, Vec2::new(1.0, 0.0), 1.0);
        assert!((signed_area(&c) - 2.0).abs() < 1e-15);
    }
}
