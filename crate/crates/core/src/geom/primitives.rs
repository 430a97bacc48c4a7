use std::fmt;

use super::point::Point3;
use super::poly::TriPoly;
use crate::error::{Error, Result};
use crate::scalar::{primitive_direction, ExactField};

/// Surfaces in three-space. Radii are stored squared.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Surface<F> {
    /// `a x + b y + c z + d = 0`.
    Plane { a: F, b: F, c: F, d: F },
    /// `|p - center|^2 = radius2`.
    Sphere { center: Point3<F>, radius2: F },
    /// Zero set of a nonconstant polynomial.
    Implicit { poly: TriPoly<F> },
}

/// Curves in three-space.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Curve<F> {
    Line { origin: Point3<F>, direction: Point3<F> },
    /// The circle of squared radius `radius2` about `center` in the plane
    /// through `center` orthogonal to `normal`.
    Circle { center: Point3<F>, normal: Point3<F>, radius2: F },
    /// Common zero set `f = g = 0`.
    ImplicitPair { f: TriPoly<F>, g: TriPoly<F> },
}

fn canonical_vec<F: ExactField>(v: &Point3<F>) -> Point3<F> {
    let c = primitive_direction(&v.to_array()).expect("nonzero vector");
    Point3::new(c[0].clone(), c[1].clone(), c[2].clone())
}

impl<F: ExactField> Surface<F> {
    pub fn plane(a: F, b: F, c: F, d: F) -> Result<Self> {
        if a.is_zero() && b.is_zero() && c.is_zero() {
            return Err(Error::InvalidGeometry("plane normal is zero".into()));
        }
        Ok(Surface::Plane { a, b, c, d }.canonicalize())
    }

    /// The plane `normal . p = normal . through`.
    pub fn plane_through(through: &Point3<F>, normal: &Point3<F>) -> Result<Self> {
        Self::plane(
            normal.x.clone(),
            normal.y.clone(),
            normal.z.clone(),
            -normal.dot(through),
        )
    }

    pub fn sphere(center: Point3<F>, radius2: F) -> Result<Self> {
        if !radius2.is_positive() {
            return Err(Error::InvalidGeometry(format!(
                "sphere radius2 must be positive, got {radius2}"
            )));
        }
        Ok(Surface::Sphere { center, radius2 })
    }

    pub fn implicit(poly: TriPoly<F>) -> Result<Self> {
        if poly.is_zero() || poly.degree() < 1 {
            return Err(Error::InvalidGeometry(
                "implicit surface needs a nonconstant polynomial".into(),
            ));
        }
        Ok(Surface::Implicit { poly })
    }

    /// Plane coefficients scaled to a primitive integer vector with first
    /// nonzero entry positive; implicit polynomials scaled to be monic.
    pub fn canonicalize(&self) -> Self {
        match self {
            Surface::Plane { a, b, c, d } => {
                let v = primitive_direction(&[a.clone(), b.clone(), c.clone(), d.clone()])
                    .expect("plane normal is nonzero");
                let [a, b, c, d]: [F; 4] = v.try_into().expect("four coefficients");
                Surface::Plane { a, b, c, d }
            }
            Surface::Sphere { .. } => self.clone(),
            Surface::Implicit { poly } => Surface::Implicit { poly: poly.monic() },
        }
    }

    pub fn defining_poly(&self) -> TriPoly<F> {
        match self {
            Surface::Plane { a, b, c, d } => {
                TriPoly::affine(a.clone(), b.clone(), c.clone(), d.clone())
            }
            Surface::Sphere { center, radius2 } => {
                let two = F::from_i64(2);
                let mut p = TriPoly::from_terms([
                    ([2, 0, 0], F::one()),
                    ([0, 2, 0], F::one()),
                    ([0, 0, 2], F::one()),
                ]);
                p = &p
                    + &TriPoly::affine(
                        -two.clone() * center.x.clone(),
                        -two.clone() * center.y.clone(),
                        -two * center.z.clone(),
                        center.norm2() - radius2.clone(),
                    );
                p
            }
            Surface::Implicit { poly } => poly.clone(),
        }
    }

    /// Exact membership: the defining equation vanishes at `p`.
    pub fn contains_point(&self, p: &Point3<F>) -> bool {
        match self {
            Surface::Plane { a, b, c, d } => {
                (a.clone() * p.x.clone() + b.clone() * p.y.clone() + c.clone() * p.z.clone()
                    + d.clone())
                .is_zero()
            }
            Surface::Sphere { center, radius2 } => &p.dist2(center) == radius2,
            Surface::Implicit { poly } => poly.eval(p).is_zero(),
        }
    }

    /// Normal vector of a plane.
    pub fn plane_normal(&self) -> Option<Point3<F>> {
        match self {
            Surface::Plane { a, b, c, .. } => Some(Point3::new(a.clone(), b.clone(), c.clone())),
            _ => None,
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            Surface::Plane { .. } => 1,
            Surface::Sphere { .. } => 2,
            Surface::Implicit { poly } => poly.degree(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Surface::Plane { .. } => "plane",
            Surface::Sphere { .. } => "sphere",
            Surface::Implicit { .. } => "implicit",
        }
    }

    /// Translates the surface by `v`.
    pub fn translate(&self, v: &Point3<F>) -> Self {
        match self {
            Surface::Plane { a, b, c, d } => {
                let n = Point3::new(a.clone(), b.clone(), c.clone());
                Surface::Plane {
                    a: a.clone(),
                    b: b.clone(),
                    c: c.clone(),
                    d: d.clone() - n.dot(v),
                }
                .canonicalize()
            }
            Surface::Sphere { center, radius2 } => Surface::Sphere {
                center: center.add(v),
                radius2: radius2.clone(),
            },
            Surface::Implicit { poly } => Surface::Implicit { poly: poly.translate(v) },
        }
    }
}

impl<F: ExactField> Curve<F> {
    pub fn line(origin: Point3<F>, direction: Point3<F>) -> Result<Self> {
        if direction.is_zero() {
            return Err(Error::InvalidGeometry("line direction is zero".into()));
        }
        Ok(Curve::Line { origin, direction }.canonicalize())
    }

    /// The line through two distinct points.
    pub fn line_through(a: &Point3<F>, b: &Point3<F>) -> Result<Self> {
        Self::line(a.clone(), b.sub(a))
    }

    pub fn circle(center: Point3<F>, normal: Point3<F>, radius2: F) -> Result<Self> {
        if normal.is_zero() {
            return Err(Error::InvalidGeometry("circle normal is zero".into()));
        }
        if !radius2.is_positive() {
            return Err(Error::InvalidGeometry(format!(
                "circle radius2 must be positive, got {radius2}"
            )));
        }
        Ok(Curve::Circle { center, normal, radius2 }.canonicalize())
    }

    pub fn implicit_pair(f: TriPoly<F>, g: TriPoly<F>) -> Result<Self> {
        if f.is_zero() || g.is_zero() {
            return Err(Error::InvalidGeometry("implicit pair has a zero polynomial".into()));
        }
        if f.is_scalar_multiple_of(&g) {
            return Err(Error::InvalidGeometry(
                "implicit pair polynomials are proportional".into(),
            ));
        }
        Ok(Curve::ImplicitPair { f, g }.canonicalize())
    }

    /// Lines: primitive direction, base point = foot of the perpendicular
    /// from the coordinate origin. Circles: primitive normal. Implicit
    /// pairs: both polynomials monic, ordered.
    pub fn canonicalize(&self) -> Self {
        match self {
            Curve::Line { origin, direction } => {
                let d = canonical_vec(direction);
                let s = origin.dot(&d) / d.norm2();
                Curve::Line { origin: origin.sub(&d.scale(&s)), direction: d }
            }
            Curve::Circle { center, normal, radius2 } => Curve::Circle {
                center: center.clone(),
                normal: canonical_vec(normal),
                radius2: radius2.clone(),
            },
            Curve::ImplicitPair { f, g } => {
                let (f, g) = (f.monic(), g.monic());
                if f <= g {
                    Curve::ImplicitPair { f, g }
                } else {
                    Curve::ImplicitPair { f: g, g: f }
                }
            }
        }
    }

    /// Exact membership.
    pub fn contains_point(&self, p: &Point3<F>) -> bool {
        match self {
            Curve::Line { origin, direction } => p.sub(origin).cross(direction).is_zero(),
            Curve::Circle { center, normal, radius2 } => {
                let w = p.sub(center);
                w.dot(normal).is_zero() && &w.norm2() == radius2
            }
            Curve::ImplicitPair { f, g } => f.eval(p).is_zero() && g.eval(p).is_zero(),
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            Curve::Line { .. } => 1,
            Curve::Circle { .. } => 2,
            Curve::ImplicitPair { f, g } => f.degree() * g.degree(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Curve::Line { .. } => "line",
            Curve::Circle { .. } => "circle",
            Curve::ImplicitPair { .. } => "implicit_pair",
        }
    }

    /// For a circle, the plane containing it.
    pub fn supporting_plane(&self) -> Option<Surface<F>> {
        match self {
            Curve::Circle { center, normal, .. } => Surface::plane_through(center, normal).ok(),
            _ => None,
        }
    }

    pub fn translate(&self, v: &Point3<F>) -> Self {
        match self {
            Curve::Line { origin, direction } => Curve::Line {
                origin: origin.add(v),
                direction: direction.clone(),
            }
            .canonicalize(),
            Curve::Circle { center, normal, radius2 } => Curve::Circle {
                center: center.add(v),
                normal: normal.clone(),
                radius2: radius2.clone(),
            },
            Curve::ImplicitPair { f, g } => Curve::ImplicitPair {
                f: f.translate(v),
                g: g.translate(v),
            }
            .canonicalize(),
        }
    }

    /// True iff the curve lies entirely in the surface.
    ///
    /// Implicit surfaces are decided for lines only.
    pub fn lies_in(&self, s: &Surface<F>) -> Result<bool> {
        match (self, s) {
            (Curve::Line { origin, direction }, Surface::Plane { .. }) => {
                let n = s.plane_normal().expect("plane");
                Ok(s.contains_point(origin) && n.dot(direction).is_zero())
            }
            (Curve::Line { .. }, Surface::Sphere { .. }) => Ok(false),
            (Curve::Line { origin, direction }, Surface::Implicit { poly }) => Ok(poly
                .restrict_to_line(origin, direction)
                .iter()
                .all(|c| c.is_zero())),
            (Curve::Circle { center, normal, .. }, Surface::Plane { .. }) => {
                let n = s.plane_normal().expect("plane");
                Ok(s.contains_point(center) && n.cross(normal).is_zero())
            }
            (
                Curve::Circle { center, normal, radius2 },
                Surface::Sphere { center: sc, radius2: sr },
            ) => {
                let w = sc.sub(center);
                Ok(w.cross(normal).is_zero() && w.norm2() + radius2.clone() == *sr)
            }
            _ => Err(Error::Unsupported(format!(
                "containment of {} in {} surface",
                self.kind(),
                s.kind()
            ))),
        }
    }
}

/// Rational points on a circle, given one rational point `anchor` on it.
///
/// Each returned point is the second intersection of the circle with a
/// chord from `anchor` in a rational direction of the circle's plane.
/// Returns at most `count` distinct points, `anchor` first.
pub fn circle_points_from<F: ExactField>(
    circle: &Curve<F>,
    anchor: &Point3<F>,
    count: usize,
) -> Vec<Point3<F>> {
    let (center, normal) = match circle {
        Curve::Circle { center, normal, .. } if circle.contains_point(anchor) => (center, normal),
        _ => return Vec::new(),
    };
    let axis = if !normal.x.is_zero() || !normal.y.is_zero() {
        Point3::from_i64(0, 0, 1)
    } else {
        Point3::from_i64(1, 0, 0)
    };
    let u = normal.cross(&axis);
    let w = normal.cross(&u);
    let a = anchor.sub(center);
    let mut out = vec![anchor.clone()];
    let mut k: i64 = 0;
    while out.len() < count && k < 4 * count as i64 + 8 {
        // k = 0, 1, -1, 2, -2, ...
        let s = if k % 2 == 0 { -(k / 2) } else { k / 2 + 1 };
        k += 1;
        let v = u.add(&w.scale(&F::from_i64(s)));
        let lam = -F::from_i64(2) * a.dot(&v) / v.norm2();
        let p = anchor.add(&v.scale(&lam));
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

impl<F: ExactField> fmt::Debug for Surface<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Surface::Plane { a, b, c, d } => write!(f, "Plane({a}, {b}, {c}, {d})"),
            Surface::Sphere { center, radius2 } => write!(f, "Sphere({center}, r2={radius2})"),
            Surface::Implicit { poly } => write!(f, "Implicit({poly})"),
        }
    }
}

impl<F: ExactField> fmt::Debug for Curve<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Curve::Line { origin, direction } => write!(f, "Line({origin} + t{direction})"),
            Curve::Circle { center, normal, radius2 } => {
                write!(f, "Circle({center}, n={normal}, r2={radius2})")
            }
            Curve::ImplicitPair { f: p, g } => write!(f, "ImplicitPair({p}; {g})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_frac(n, d)
    }

    fn pt(x: Q, y: Q, z: Q) -> Point3<Q> {
        Point3::new(x, y, z)
    }

    #[test]
    fn plane_canonical_form() {
        let p = Surface::plane(q(2, 1), q(2, 1), q(2, 1), q(-2, 1)).unwrap();
        assert_eq!(
            p,
            Surface::Plane { a: q(1, 1), b: q(1, 1), c: q(1, 1), d: q(-1, 1) }
        );
        let r = Surface::plane(q(-1, 2), q(0, 1), q(0, 1), q(1, 3)).unwrap();
        assert_eq!(
            r,
            Surface::Plane { a: q(3, 1), b: q(0, 1), c: q(0, 1), d: q(-2, 1) }
        );
        assert!(Surface::plane(q(0, 1), q(0, 1), q(0, 1), q(1, 1)).is_err());
    }

    #[test]
    fn circle_normal_sign_rule() {
        let c = Curve::circle(Point3::origin(), Point3::from_i64(0, 0, -3), q(1, 1)).unwrap();
        match c {
            Curve::Circle { normal, .. } => assert_eq!(normal, Point3::from_i64(0, 0, 1)),
            _ => unreachable!(),
        }
    }

    #[test]
    fn line_canonical_base_point() {
        let l = Curve::<Q>::line(Point3::from_i64(1, 1, 1), Point3::from_i64(-2, 0, 0)).unwrap();
        assert_eq!(
            l,
            Curve::Line {
                origin: Point3::from_i64(0, 1, 1),
                direction: Point3::from_i64(1, 0, 0)
            }
        );
        let m = Curve::line(Point3::from_i64(5, 1, 1), Point3::from_i64(3, 0, 0)).unwrap();
        assert_eq!(l, m);
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let l = Curve::Line {
            origin: pt(q(1, 2), q(3, 1), q(-1, 1)),
            direction: pt(q(2, 3), q(-4, 3), q(2, 1)),
        };
        let c1 = l.canonicalize();
        assert_eq!(c1.canonicalize(), c1);
        let s = Surface::Plane { a: q(-6, 1), b: q(4, 1), c: q(0, 1), d: q(2, 1) };
        assert_eq!(s.canonicalize().canonicalize(), s.canonicalize());
    }

    #[test]
    fn membership_examples() {
        let s = Surface::sphere(Point3::from_i64(1, 0, 0), q(1, 1)).unwrap();
        assert!(s.contains_point(&Point3::origin()));
        let z0 = Surface::plane(q(0, 1), q(0, 1), q(1, 1), q(0, 1)).unwrap();
        assert!(!z0.contains_point(&Point3::from_i64(0, 0, 1)));
        let par = &(&TriPoly::z() - &TriPoly::x().pow(2)) - &TriPoly::y().pow(2);
        let imp = Surface::implicit(par).unwrap();
        assert!(imp.contains_point(&pt(q(1, 2), q(1, 2), q(1, 2))));
    }

    #[test]
    fn curve_membership_examples() {
        let x_axis = Curve::line(Point3::<Q>::origin(), Point3::from_i64(1, 0, 0)).unwrap();
        assert!(x_axis.contains_point(&Point3::from_i64(2, 0, 0)));

        let c = Curve::circle(pt(q(1, 2), q(0, 1), q(0, 1)), Point3::from_i64(1, 0, 0), q(3, 4))
            .unwrap();
        // 1/4 + 1/4 = 1/2, not 3/4
        assert!(!c.contains_point(&pt(q(1, 2), q(1, 2), q(1, 2))));

        let c = Curve::circle(pt(q(1, 2), q(0, 1), q(0, 1)), Point3::from_i64(1, 0, 0), q(25, 4))
            .unwrap();
        assert!(c.contains_point(&pt(q(1, 2), q(3, 2), q(2, 1))));

        let z_axis = Curve::<Q>::implicit_pair(TriPoly::x(), TriPoly::y()).unwrap();
        assert!(z_axis.contains_point(&Point3::origin()));
        assert!(z_axis.contains_point(&Point3::from_i64(0, 0, 7)));
        assert!(!z_axis.contains_point(&Point3::from_i64(1, 0, 7)));
    }

    #[test]
    fn invalid_objects_rejected() {
        assert!(Surface::sphere(Point3::<Q>::origin(), q(0, 1)).is_err());
        assert!(Curve::line(Point3::<Q>::origin(), Point3::origin()).is_err());
        assert!(Curve::implicit_pair(TriPoly::<Q>::x(), TriPoly::x().scale(&q(3, 1))).is_err());
        assert!(Surface::implicit(TriPoly::constant(q(1, 1))).is_err());
    }

    #[test]
    fn containment() {
        let sphere = Surface::sphere(Point3::origin(), q(1, 1)).unwrap();
        let c = Curve::circle(pt(q(0, 1), q(0, 1), q(1, 2)), Point3::from_i64(0, 0, 1), q(3, 4))
            .unwrap();
        assert!(c.lies_in(&sphere).unwrap());
        assert!(c.lies_in(&c.supporting_plane().unwrap()).unwrap());
        let l = Curve::line(Point3::from_i64(0, 0, 3), Point3::from_i64(1, 1, 0)).unwrap();
        let z3 = Surface::plane(q(0, 1), q(0, 1), q(1, 1), q(-3, 1)).unwrap();
        assert!(l.lies_in(&z3).unwrap());
        assert!(!l.lies_in(&sphere).unwrap());
    }

    #[test]
    fn chord_parametrization_stays_on_circle() {
        let c = Curve::circle(Point3::origin(), Point3::from_i64(1, 2, 2), q(9, 1)).unwrap();
        // orthogonal to (1, 2, 2), squared norm 9
        let anchor = Point3::from_i64(2, -2, 1);
        let pts = circle_points_from(&c, &anchor, 12);
        assert_eq!(pts.len(), 12);
        for p in &pts {
            assert!(c.contains_point(p));
        }
    }

    #[test]
    fn sphere_defining_poly_matches_membership() {
        let s = Surface::sphere(pt(q(1, 2), q(-1, 1), q(0, 1)), q(9, 4)).unwrap();
        let f = s.defining_poly();
        for p in [pt(q(2, 1), q(-1, 1), q(0, 1)), pt(q(1, 2), q(1, 2), q(0, 1))] {
            assert_eq!(f.eval(&p) == q(0, 1), s.contains_point(&p));
        }
    }
}
