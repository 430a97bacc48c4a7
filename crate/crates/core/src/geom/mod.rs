//! Exact points, polynomials, surfaces, curves and their intersections.

pub mod intersect;
pub mod point;
pub mod poly;
pub mod primitives;

pub use intersect::{
    curve_pair_intersection, point_on_curve, point_on_surface, sphere_sphere,
    surface_pair_intersection, IntersectionResult,
};
pub use point::{collinear, Point3};
pub use poly::{eval_poly, Exponent, TriPoly};
pub use primitives::{circle_points_from, Curve, Surface};
