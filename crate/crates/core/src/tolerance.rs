use serde::{Deserialize, Serialize};

/// Numeric tolerances shared by every module. All fields can be overridden
/// from a JSON file; missing fields keep their defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Edge-length and point coincidence.
    pub len: f64,
    /// Angle comparisons in radians.
    pub angle: f64,
    /// A ray passing within this distance of a polygon vertex hits it.
    pub hit: f64,
    /// State recurrence (position and direction) for periodicity detection.
    pub rec: f64,
    /// Developed collinearity, per unit length.
    pub dev: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { len: 1e-9, angle: 1e-9, hit: 1e-9, rec: 1e-7, dev: 1e-8 }
    }
}

impl Tolerances {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
