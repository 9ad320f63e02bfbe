//! Bundled example surfaces.

use crate::surface::ConeSurface;

pub const FLAT_TORUS_JSON: &str = include_str!("../data/torus.json");
pub const MARKED_TORUS_JSON: &str = include_str!("../data/torus_marked.json");
pub const OCTAGON_JSON: &str = include_str!("../data/octagon.json");
pub const PILLOWCASE_JSON: &str = include_str!("../data/pillowcase.json");
pub const QUARTER_CONE_JSON: &str = include_str!("../data/quarter_cone.json");

fn load(text: &str) -> ConeSurface {
    ConeSurface::from_json(text).expect("bundled surface is valid")
}

/// Unit square with opposite sides glued; the corner is an ordinary point.
pub fn flat_torus() -> ConeSurface {
    load(FLAT_TORUS_JSON)
}

/// Unit square torus with the corner kept as a marked point of angle 2pi.
pub fn marked_torus() -> ConeSurface {
    load(MARKED_TORUS_JSON)
}

/// Regular octagon of circumradius 1 with horizontal and vertical sides,
/// opposite sides glued by translation. Genus 2, one cone point of angle 6pi.
pub fn octagon() -> ConeSurface {
    load(OCTAGON_JSON)
}

/// Two unit squares glued along their boundary: a sphere with four cone
/// points of angle pi.
pub fn pillowcase() -> ConeSurface {
    load(PILLOWCASE_JSON)
}

/// A 3x3 square folded into a sphere: the corner at the origin is a cone
/// point of angle pi/2 (its two sides are glued by a quarter turn), the
/// opposite corner another pi/2 point, and the remaining two corners form a
/// single point of angle pi.
pub fn quarter_cone() -> ConeSurface {
    load(QUARTER_CONE_JSON)
}

pub fn all() -> Vec<ConeSurface> {
    vec![flat_torus(), marked_torus(), octagon(), pillowcase(), quarter_cone()]
}

/// Name/surface pairs for reporting.
pub fn named() -> Vec<(&'static str, ConeSurface)> {
    vec![
        ("torus", flat_torus()),
        ("torus_marked", marked_torus()),
        ("octagon", octagon()),
        ("pillowcase", pillowcase()),
        ("quarter_cone", quarter_cone()),
    ]
}
