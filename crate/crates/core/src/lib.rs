//! Euclidean cone surfaces built from glued polygons: geodesic tracing,
//! saddle connections, flat cylinders and branched covers.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod corpus;
pub mod covering;
pub mod cylinders;
pub mod geom;
pub mod perm;
pub mod saddles;
pub mod surface;
pub mod svg;
pub mod tolerance;
pub mod tracer;

pub use geom::{Isometry, PlanarPoint, Vec2};
pub use surface::{build_surface, ConeSurface, SurfaceDescription, SurfaceError};
pub use tolerance::Tolerances;
pub use tracer::{trace, GeodesicState, TraceOptions, TraceResult};
