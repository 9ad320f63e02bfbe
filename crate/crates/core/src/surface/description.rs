use serde::{Deserialize, Serialize};

/// On-disk surface format.
///
/// ```json
/// { "polygons": [ { "id": "sq", "vertices": [[0,0],[1,0],[1,1],[0,1]] } ],
///   "gluings":  [ { "a": ["sq", 0], "b": ["sq", 2] }, { "a": ["sq", 1], "b": ["sq", 3] } ] }
/// ```
///
/// `regular_vertices` is optional: it lists corners whose vertex class has
/// total angle 2pi and is an ordinary point rather than a marked point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceDescription {
    pub polygons: Vec<PolygonDescription>,
    pub gluings: Vec<GluingDescription>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub regular_vertices: Vec<(String, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonDescription {
    pub id: String,
    pub vertices: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GluingDescription {
    pub a: (String, usize),
    pub b: (String, usize),
}

impl SurfaceDescription {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("surface description serializes")
    }
}
