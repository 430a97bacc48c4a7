//! Closed-form intersection predicates for planes, spheres, lines and circles.

use super::point::Point3;
use super::primitives::{Curve, Surface};
use crate::error::{Error, Result};
use crate::scalar::ExactField;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum IntersectionResult<F> {
    EmptySet,
    SinglePoint(Point3<F>),
    /// Always a canonical `Curve::Circle`.
    CircleCurve(Curve<F>),
    /// Always a canonical `Curve::Line`.
    LineCurve(Curve<F>),
    CoincidentSurfaces,
    Unsupported,
}

impl<F: ExactField> IntersectionResult<F> {
    /// The one-dimensional part, if any.
    pub fn curve(&self) -> Option<&Curve<F>> {
        match self {
            IntersectionResult::CircleCurve(c) | IntersectionResult::LineCurve(c) => Some(c),
            _ => None,
        }
    }
}

impl<F: ExactField> std::fmt::Debug for IntersectionResult<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IntersectionResult::EmptySet => write!(f, "EmptySet"),
            IntersectionResult::SinglePoint(p) => write!(f, "SinglePoint{p}"),
            IntersectionResult::CircleCurve(c) => write!(f, "CircleCurve({c:?})"),
            IntersectionResult::LineCurve(c) => write!(f, "LineCurve({c:?})"),
            IntersectionResult::CoincidentSurfaces => write!(f, "CoincidentSurfaces"),
            IntersectionResult::Unsupported => write!(f, "Unsupported"),
        }
    }
}

pub fn point_on_surface<F: ExactField>(p: &Point3<F>, s: &Surface<F>) -> bool {
    s.contains_point(p)
}

pub fn point_on_curve<F: ExactField>(p: &Point3<F>, c: &Curve<F>) -> bool {
    c.contains_point(p)
}

pub fn surface_pair_intersection<F: ExactField>(
    s1: &Surface<F>,
    s2: &Surface<F>,
) -> IntersectionResult<F> {
    use IntersectionResult::*;
    let (c1, c2) = (s1.canonicalize(), s2.canonicalize());
    if c1 == c2 {
        return CoincidentSurfaces;
    }
    match (&c1, &c2) {
        (Surface::Plane { d: d1, .. }, Surface::Plane { d: d2, .. }) => {
            let n1 = c1.plane_normal().expect("plane");
            let n2 = c2.plane_normal().expect("plane");
            let u = n1.cross(&n2);
            if u.is_zero() {
                return EmptySet;
            }
            // n_i . x = h_i
            let (h1, h2) = (-d1.clone(), -d2.clone());
            let x = n2
                .cross(&u)
                .scale(&h1)
                .add(&u.cross(&n1).scale(&h2))
                .scale(&(F::one() / u.norm2()));
            LineCurve(Curve::Line { origin: x, direction: u }.canonicalize())
        }
        (Surface::Plane { .. }, Surface::Sphere { center, radius2 })
        | (Surface::Sphere { center, radius2 }, Surface::Plane { .. }) => {
            let plane = if matches!(c1, Surface::Plane { .. }) { &c1 } else { &c2 };
            plane_sphere(plane, center, radius2)
        }
        (
            Surface::Sphere { center: a, radius2: ra },
            Surface::Sphere { center: b, radius2: rb },
        ) => sphere_sphere(a, ra, b, rb),
        _ => Unsupported,
    }
}

fn plane_sphere<F: ExactField>(
    plane: &Surface<F>,
    center: &Point3<F>,
    radius2: &F,
) -> IntersectionResult<F> {
    let n = plane.plane_normal().expect("plane");
    let d = match plane {
        Surface::Plane { d, .. } => d.clone(),
        _ => unreachable!(),
    };
    let nn = n.norm2();
    let s = (n.dot(center) + d) / nn.clone();
    let foot = center.sub(&n.scale(&s));
    let r2 = radius2.clone() - s.clone() * s * nn;
    if r2.is_positive() {
        IntersectionResult::CircleCurve(
            Curve::Circle { center: foot, normal: n, radius2: r2 }.canonicalize(),
        )
    } else if r2.is_zero() {
        IntersectionResult::SinglePoint(foot)
    } else {
        IntersectionResult::EmptySet
    }
}

/// Intersection of `|x - a|^2 = ra` and `|x - b|^2 = rb`.
pub fn sphere_sphere<F: ExactField>(
    a: &Point3<F>,
    ra: &F,
    b: &Point3<F>,
    rb: &F,
) -> IntersectionResult<F> {
    let delta = b.sub(a);
    let d2 = delta.norm2();
    if d2.is_zero() {
        return if ra == rb {
            IntersectionResult::CoincidentSurfaces
        } else {
            IntersectionResult::EmptySet
        };
    }
    let t = (d2.clone() + ra.clone() - rb.clone()) / (F::from_i64(2) * d2.clone());
    let center = a.add(&delta.scale(&t));
    let r2 = ra.clone() - t.clone() * t * d2;
    if r2.is_positive() {
        IntersectionResult::CircleCurve(
            Curve::Circle { center, normal: delta, radius2: r2 }.canonicalize(),
        )
    } else if r2.is_zero() {
        IntersectionResult::SinglePoint(center)
    } else {
        IntersectionResult::EmptySet
    }
}

/// Parameters `l` with `|o + l d - c|^2 = r2`, rational roots only.
fn line_sphere_params<F: ExactField>(
    o: &Point3<F>,
    d: &Point3<F>,
    c: &Point3<F>,
    r2: &F,
) -> Vec<F> {
    let w = o.sub(c);
    let qa = d.norm2();
    let qb = F::from_i64(2) * w.dot(d);
    let qc = w.norm2() - r2.clone();
    let disc = qb.clone() * qb.clone() - F::from_i64(4) * qa.clone() * qc;
    let two_a = F::from_i64(2) * qa;
    if disc.is_negative() {
        return Vec::new();
    }
    if disc.is_zero() {
        return vec![-qb / two_a];
    }
    match disc.rational_sqrt() {
        Some(s) => vec![
            (-qb.clone() - s.clone()) / two_a.clone(),
            (-qb + s) / two_a,
        ],
        // The two common points are irrational and thus not representable.
        None => Vec::new(),
    }
}

fn line_circle<F: ExactField>(
    o: &Point3<F>,
    d: &Point3<F>,
    circle: &Curve<F>,
) -> Vec<Point3<F>> {
    let (center, normal, radius2) = match circle {
        Curve::Circle { center, normal, radius2 } => (center, normal, radius2),
        _ => unreachable!(),
    };
    let dn = d.dot(normal);
    let off = o.sub(center).dot(normal);
    if dn.is_zero() {
        if !off.is_zero() {
            return Vec::new();
        }
        line_sphere_params(o, d, center, radius2)
            .into_iter()
            .map(|l| o.add(&d.scale(&l)))
            .collect()
    } else {
        let p = o.add(&d.scale(&(-off / dn)));
        if circle.contains_point(&p) {
            vec![p]
        } else {
            Vec::new()
        }
    }
}

/// All common points of two lines or circles.
///
/// Only rational intersection points are returned; a line meeting a circle
/// in two irrational points contributes nothing.
pub fn curve_pair_intersection<F: ExactField>(
    g1: &Curve<F>,
    g2: &Curve<F>,
) -> Result<Vec<Point3<F>>> {
    let (c1, c2) = (g1.canonicalize(), g2.canonicalize());
    if matches!(c1, Curve::ImplicitPair { .. }) || matches!(c2, Curve::ImplicitPair { .. }) {
        return Err(Error::Unsupported("intersection of implicit-pair curves".into()));
    }
    if c1 == c2 {
        return Err(Error::Coincident(format!("{c1:?}")));
    }
    let mut pts = match (&c1, &c2) {
        (Curve::Line { origin: o1, direction: d1 }, Curve::Line { origin: o2, direction: d2 }) => {
            let x = d1.cross(d2);
            let w = o2.sub(o1);
            if x.is_zero() || !w.dot(&x).is_zero() {
                Vec::new()
            } else {
                let s = w.cross(d2).dot(&x) / x.norm2();
                vec![o1.add(&d1.scale(&s))]
            }
        }
        (Curve::Line { origin, direction }, circle @ Curve::Circle { .. })
        | (circle @ Curve::Circle { .. }, Curve::Line { origin, direction }) => {
            line_circle(origin, direction, circle)
        }
        (
            Curve::Circle { center: a, normal: n1, radius2: ra },
            Curve::Circle { center: b, normal: n2, radius2: rb },
        ) => {
            let p1 = c1.supporting_plane().expect("circle plane");
            let p2 = c2.supporting_plane().expect("circle plane");
            if n1 == n2 {
                if p1 != p2 {
                    Vec::new()
                } else {
                    coplanar_circles(a, ra, b, rb, n1, &c1)
                }
            } else {
                match surface_pair_intersection(&p1, &p2) {
                    IntersectionResult::LineCurve(Curve::Line { origin, direction }) => {
                        line_circle(&origin, &direction, &c1)
                            .into_iter()
                            .filter(|p| c2.contains_point(p))
                            .collect()
                    }
                    _ => Vec::new(),
                }
            }
        }
        _ => unreachable!(),
    };
    pts.sort();
    pts.dedup();
    Ok(pts)
}

fn coplanar_circles<F: ExactField>(
    a: &Point3<F>,
    ra: &F,
    b: &Point3<F>,
    rb: &F,
    normal: &Point3<F>,
    first: &Curve<F>,
) -> Vec<Point3<F>> {
    let delta = b.sub(a);
    let dd = delta.norm2();
    if dd.is_zero() {
        return Vec::new();
    }
    // Radical line: 2 x . delta = ra - rb + |b|^2 - |a|^2, inside the plane.
    let rhs = ra.clone() - rb.clone() + b.norm2() - a.norm2();
    let tau = (rhs - F::from_i64(2) * a.dot(&delta)) / (F::from_i64(2) * dd);
    let base = a.add(&delta.scale(&tau));
    let dir = normal.cross(&delta);
    line_circle(&base, &dir, first)
}
