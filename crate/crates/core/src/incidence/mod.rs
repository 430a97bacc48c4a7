//! Incidence counting, bipartite decompositions, rich points and projection.

pub mod cospherical;
pub mod decompose;
pub mod graph;
pub mod project;
pub mod rich;

pub use cospherical::coplanar_cospherical_max;
pub use decompose::{decompose, j_value, BipartiteDecomposition, Component, JValue};
pub use graph::{contains_krs, count_incidences, Incident, IncidenceGraph};
pub use project::{project_generic, PlanarCurve, PlanarInstance};
pub use rich::rich_points;
