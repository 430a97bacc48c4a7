//! Instance generators: extremal grids, the paraboloid lift, packings of
//! copies, rational points on varieties, and distance sphere families.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::incidence::count_incidences;
use crate::scalar::ExactField;
use crate::{Curve, Point3, Scalar, Surface, TriPoly};

/// Largest Elekes grid parameter (`m = 2 kk^3` points).
pub const ELEKES_GUARD: u32 = 16;
/// Reseeds allowed when packing copies.
pub const PACKING_RESEEDS: u32 = 16;

/// Parameters of a curve or surface family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    /// Degrees of freedom.
    pub k: u32,
    /// Multiplicity.
    pub mu: u32,
    /// Family dimension.
    pub s: u32,
    /// Maximum degree.
    #[serde(rename = "E")]
    pub e: u32,
    /// Largest number of objects allowed on one ruled surface, if bounded.
    pub q: Option<u64>,
    #[serde(with = "crate::io::scalar_string")]
    pub epsilon: Scalar,
}

impl FamilyDescriptor {
    pub fn new(k: u32, mu: u32, s: u32, e: u32) -> Self {
        FamilyDescriptor { k, mu, s, e, q: None, epsilon: default_epsilon() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.mu == 0 || self.s == 0 || self.e == 0 {
            return Err(Error::InvalidGeometry(format!("family parameters must be >= 1: {self:?}")));
        }
        if !self.epsilon.is_positive() {
            return Err(Error::InvalidGeometry("epsilon must be positive".into()));
        }
        Ok(())
    }

    /// Lines in space: two degrees of freedom, degree one.
    pub fn lines() -> Self {
        Self::new(2, 1, 4, 1)
    }

    /// Circles: three degrees of freedom, multiplicity two.
    pub fn circles() -> Self {
        Self::new(3, 2, 6, 2)
    }

    pub fn planes() -> Self {
        Self::new(3, 1, 3, 1)
    }

    pub fn spheres() -> Self {
        Self::new(3, 1, 4, 2)
    }
}

pub fn default_epsilon() -> Scalar {
    Scalar::from_frac(1, 100)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub points: Vec<Point3>,
    pub curves: Vec<Curve>,
    pub surfaces: Vec<Surface>,
    pub family: FamilyDescriptor,
    pub label: String,
}

impl Instance {
    /// Incidences of the points with the curves and the surfaces.
    pub fn incidence_count(&self) -> usize {
        count_incidences(&self.points, &self.curves).0 + count_incidences(&self.points, &self.surfaces).0
    }
}

fn q(v: i64) -> Scalar {
    Scalar::from_i64(v)
}

/// Points `(i, j, 0)` with `i <= kk`, `j <= 2 kk^2` and lines `y = a x + b`
/// with `a <= kk`, `b <= kk^2`; each line holds exactly `kk` points.
pub fn gen_elekes_grid(kk: u32) -> Result<Instance> {
    if kk == 0 {
        return Err(Error::Precondition("Elekes grid needs kk >= 1".into()));
    }
    if kk > ELEKES_GUARD {
        return Err(Error::GuardExceeded(format!("Elekes grid kk = {kk} > {ELEKES_GUARD}")));
    }
    let k = kk as i64;
    let mut points = Vec::with_capacity((2 * k * k * k) as usize);
    for i in 1..=k {
        for j in 1..=2 * k * k {
            points.push(Point3::from_i64(i, j, 0));
        }
    }
    let mut curves = Vec::with_capacity((k * k * k) as usize);
    for a in 1..=k {
        for b in 1..=k * k {
            curves.push(Curve::line(Point3::from_i64(0, b, 0), Point3::from_i64(1, a, 0))?);
        }
    }
    Ok(Instance {
        points,
        curves,
        surfaces: Vec::new(),
        family: FamilyDescriptor::lines(),
        label: format!("elekes(kk={kk})"),
    })
}

/// `z - x^2 - y^2`.
pub fn paraboloid_poly() -> TriPoly {
    &(&TriPoly::z() - &TriPoly::x().pow(2)) - &TriPoly::y().pow(2)
}

/// The vertical parabola over the planar line `y = a x + b`.
pub fn lifted_parabola(a: &Scalar, b: &Scalar) -> Result<Curve> {
    let line = TriPoly::affine(-a.clone(), q(1), q(0), -b.clone());
    Curve::implicit_pair(line, paraboloid_poly())
}

/// `(z - x^2 - y^2) + (y - a x - b)(c0 + c1 x + c2 y)`: a quadric through
/// the lifted parabola of `(a, b)`.
pub fn lift_surface_poly(a: &Scalar, b: &Scalar, w: &[Scalar; 3]) -> TriPoly {
    let line = TriPoly::affine(-a.clone(), q(1), q(0), -b.clone());
    let lin = TriPoly::affine(w[1].clone(), w[2].clone(), q(0), w[0].clone());
    &paraboloid_poly() + &(&line * &lin)
}

/// `(x, y) -> (x, y, x^2 + y^2)`.
pub fn lift_point(x: &Scalar, y: &Scalar) -> Point3 {
    let z = x.clone() * x.clone() + y.clone() * y.clone();
    Point3::new(x.clone(), y.clone(), z)
}

/// Parabolas over the given planar lines, the quadrics of every witness
/// through every parabola, and the lifts of `planar_points`.
pub fn gen_paraboloid_lift(
    lines: &[(Scalar, Scalar)],
    witnesses: &[[Scalar; 3]],
    planar_points: &[(Scalar, Scalar)],
) -> Result<Instance> {
    let distinct: BTreeSet<&(Scalar, Scalar)> = lines.iter().collect();
    if distinct.len() != lines.len() {
        return Err(Error::Precondition("lifted lines must be distinct".into()));
    }
    let mut curves = Vec::with_capacity(lines.len());
    let mut surfaces = Vec::new();
    for (a, b) in lines {
        curves.push(lifted_parabola(a, b)?);
        for w in witnesses {
            surfaces.push(Surface::implicit(lift_surface_poly(a, b, w))?);
        }
    }
    let mut family = FamilyDescriptor::new(2, 1, 5, 2);
    family.q = Some(lines.len() as u64);
    Ok(Instance {
        points: planar_points.iter().map(|(x, y)| lift_point(x, y)).collect(),
        curves,
        surfaces,
        family,
        label: format!("paraboloid-lift(lines={}, witnesses={})", lines.len(), witnesses.len()),
    })
}

/// Lifts a planar instance of points and non-vertical lines in `z = 0`.
pub fn lift_planar_instance(planar: &Instance, witnesses: &[[Scalar; 3]]) -> Result<Instance> {
    let mut lines = Vec::with_capacity(planar.curves.len());
    for c in &planar.curves {
        match c {
            Curve::Line { origin, direction }
                if origin.z.is_zero() && direction.z.is_zero() && !direction.x.is_zero() =>
            {
                let a = direction.y.clone() / direction.x.clone();
                let b = origin.y.clone() - a.clone() * origin.x.clone();
                lines.push((a, b));
            }
            other => {
                return Err(Error::Precondition(format!(
                    "only non-vertical lines in z = 0 lift, got {other:?}"
                )))
            }
        }
    }
    let mut pts = Vec::with_capacity(planar.points.len());
    for p in &planar.points {
        if !p.z.is_zero() {
            return Err(Error::Precondition(format!("point {p} is not in z = 0")));
        }
        pts.push((p.x.clone(), p.y.clone()));
    }
    let mut out = gen_paraboloid_lift(&lines, witnesses, &pts)?;
    out.label = format!("lift({})", planar.label);
    Ok(out)
}

fn random_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Scalar {
    Scalar::from_frac(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

fn random_translation(rng: &mut ChaCha8Rng) -> Point3 {
    Point3::new(
        random_rational(rng, 1000, 97),
        random_rational(rng, 1000, 97),
        random_rational(rng, 1000, 97),
    )
}

/// `copies` translates of `template` (the first untranslated) sharing no
/// point or object, with no point of one copy on an object of another.
pub fn gen_packing_copies(template: &Instance, copies: usize, seed: u64) -> Result<Instance> {
    gen_packing_copies_from(template, copies, seed, &mut random_translation)
}

/// As [`gen_packing_copies`] with a caller-supplied translation sampler.
pub fn gen_packing_copies_from(
    template: &Instance,
    copies: usize,
    seed: u64,
    draw: &mut dyn FnMut(&mut ChaCha8Rng) -> Point3,
) -> Result<Instance> {
    if copies == 0 {
        return Err(Error::Precondition("copies must be >= 1".into()));
    }
    let mut last = String::new();
    for attempt in 0..PACKING_RESEEDS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64));
        let mut shifts = vec![Point3::origin()];
        shifts.extend((1..copies).map(|_| draw(&mut rng)));
        match pack_with_translations(template, &shifts) {
            Ok(inst) => return Ok(inst),
            Err(Error::GenericityFailure { reason, .. }) => last = reason,
            Err(e) => return Err(e),
        }
    }
    Err(Error::GenericityFailure { attempts: PACKING_RESEEDS, reason: last })
}

/// Union of the translates of `template` by `shifts`, verified disjoint.
pub fn pack_with_translations(template: &Instance, shifts: &[Point3]) -> Result<Instance> {
    let fail = |reason: String| Error::GenericityFailure { attempts: 1, reason };
    let mut points = Vec::new();
    let mut curves = Vec::new();
    let mut surfaces = Vec::new();
    let mut copy_of_point = Vec::new();
    let mut copy_of_curve = Vec::new();
    let mut copy_of_surface = Vec::new();
    for (ci, v) in shifts.iter().enumerate() {
        points.extend(template.points.iter().map(|p| p.add(v)));
        curves.extend(template.curves.iter().map(|c| c.translate(v)));
        surfaces.extend(template.surfaces.iter().map(|s| s.translate(v)));
        copy_of_point.resize(points.len(), ci);
        copy_of_curve.resize(curves.len(), ci);
        copy_of_surface.resize(surfaces.len(), ci);
    }
    let n_p: BTreeSet<&Point3> = points.iter().collect();
    let n_c: BTreeSet<Curve> = curves.iter().map(|c| c.canonicalize()).collect();
    let n_s: BTreeSet<Surface> = surfaces.iter().map(|s| s.canonicalize()).collect();
    let own_p: BTreeSet<&Point3> = template.points.iter().collect();
    let own_c: BTreeSet<Curve> = template.curves.iter().map(|c| c.canonicalize()).collect();
    let own_s: BTreeSet<Surface> = template.surfaces.iter().map(|s| s.canonicalize()).collect();
    let k = shifts.len();
    if n_p.len() != own_p.len() * k {
        return Err(fail("two copies share a point".into()));
    }
    if n_c.len() != own_c.len() * k || n_s.len() != own_s.len() * k {
        return Err(fail("two copies share an object".into()));
    }
    let (_, gc) = count_incidences(&points, &curves);
    let (_, gs) = count_incidences(&points, &surfaces);
    let cross = gc.edges.iter().any(|&(p, o)| copy_of_point[p] != copy_of_curve[o])
        || gs.edges.iter().any(|&(p, o)| copy_of_point[p] != copy_of_surface[o]);
    if cross {
        return Err(fail("a point of one copy lies on an object of another".into()));
    }
    Ok(Instance {
        points,
        curves,
        surfaces,
        family: template.family.clone(),
        label: format!("packing({}, copies={k})", template.label),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Variety {
    /// `radius2` must be the square of a rational.
    Sphere { center: Point3, radius2: Scalar },
    /// `z = x^2 + y^2`.
    Paraboloid,
    /// `a x + b y + c z + d = 0`.
    Plane { a: Scalar, b: Scalar, c: Scalar, d: Scalar },
}

impl Variety {
    pub fn surface(&self) -> Result<Surface> {
        match self {
            Variety::Sphere { center, radius2 } => Surface::sphere(center.clone(), radius2.clone()),
            Variety::Paraboloid => Surface::implicit(paraboloid_poly()),
            Variety::Plane { a, b, c, d } => Surface::plane(a.clone(), b.clone(), c.clone(), d.clone()),
        }
    }
}

/// Inverse stereographic projection onto the sphere of radius `r` about
/// `center` from its south pole.
pub fn stereographic(center: &Point3, r: &Scalar, u: &Scalar, v: &Scalar) -> Point3 {
    let s = u.clone() * u.clone() + v.clone() * v.clone();
    let k = r.clone() / (s.clone() + Scalar::one());
    let two = q(2);
    center.add(&Point3::new(
        two.clone() * u.clone() * k.clone(),
        two * v.clone() * k.clone(),
        (s - Scalar::one()) * k,
    ))
}

/// `n` distinct seeded rational points exactly on `which`.
pub fn gen_random_on_variety(which: &Variety, n: usize, seed: u64) -> Result<Instance> {
    let surface = which.surface()?;
    let radius = match which {
        Variety::Sphere { radius2, .. } => Some(radius2.rational_sqrt().ok_or_else(|| {
            Error::Precondition(format!("sphere radius2 = {radius2} is not a rational square"))
        })?),
        _ => None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut points = Vec::with_capacity(n);
    let mut tries = 0usize;
    while points.len() < n {
        tries += 1;
        if tries > 100 * n + 1000 {
            return Err(Error::GenericityFailure {
                attempts: tries as u32,
                reason: "could not draw enough distinct points".into(),
            });
        }
        let u = random_rational(&mut rng, 100, 37);
        let v = random_rational(&mut rng, 100, 37);
        let p = match which {
            Variety::Sphere { center, .. } => stereographic(center, radius.as_ref().expect("sphere"), &u, &v),
            Variety::Paraboloid => lift_point(&u, &v),
            Variety::Plane { a, b, c, d } => {
                // solve for the last coordinate with a nonzero coefficient
                if !c.is_zero() {
                    Point3::new(u.clone(), v.clone(), -(a.clone() * u + b.clone() * v + d.clone()) / c.clone())
                } else if !b.is_zero() {
                    Point3::new(u.clone(), -(a.clone() * u + c.clone() * v.clone() + d.clone()) / b.clone(), v)
                } else {
                    Point3::new(-(b.clone() * u.clone() + c.clone() * v.clone() + d.clone()) / a.clone(), u, v)
                }
            }
        };
        debug_assert!(surface.contains_point(&p));
        if seen.insert(p.clone()) {
            points.push(p);
        }
    }
    let family = match which {
        Variety::Plane { .. } => FamilyDescriptor::planes(),
        _ => FamilyDescriptor::spheres(),
    };
    Ok(Instance {
        points,
        curves: Vec::new(),
        surfaces: vec![surface],
        family,
        label: format!("random-on-variety(n={n}, seed={seed})"),
    })
}

/// Distinct squared distances over `p1 x p2`.
fn cross_distances(p1: &[Point3], p2: &[Point3]) -> BTreeSet<Scalar> {
    p1.iter().flat_map(|a| p2.iter().map(move |b| a.dist2(b))).collect()
}

/// Around every point of `p2`, one sphere per distinct distance realized
/// between `p1` and `p2`. Returns the spheres and that number `t`.
pub fn gen_distance_spheres(p1: &[Point3], p2: &[Point3]) -> Result<(Vec<Surface>, usize)> {
    if p1.is_empty() || p2.is_empty() {
        return Err(Error::Precondition("both point sets must be nonempty".into()));
    }
    let s1: BTreeSet<&Point3> = p1.iter().collect();
    if p2.iter().any(|p| s1.contains(p)) {
        return Err(Error::Precondition("point sets must be disjoint".into()));
    }
    let radii = cross_distances(p1, p2);
    let centers: BTreeSet<&Point3> = p2.iter().collect();
    let mut spheres = Vec::with_capacity(centers.len() * radii.len());
    for c in centers {
        for r in &radii {
            spheres.push(Surface::sphere(c.clone(), r.clone())?);
        }
    }
    Ok((spheres, radii.len()))
}

/// One sphere of squared radius `radius2` about every point.
pub fn gen_unit_spheres(points: &[Point3], radius2: &Scalar) -> Result<Vec<Surface>> {
    let distinct: BTreeSet<&Point3> = points.iter().collect();
    if distinct.len() != points.len() {
        return Err(Error::Precondition("points must be distinct".into()));
    }
    points.iter().map(|p| Surface::sphere(p.clone(), radius2.clone())).collect()
}

/// Points of `p2` on the axis of `circle`.
pub fn circle_axis_multiplicity(circle: &Curve, p2: &[Point3]) -> Result<usize> {
    let Curve::Circle { center, normal, .. } = circle else {
        return Err(Error::Precondition(format!("expected a circle, got {circle:?}")));
    };
    let axis = Curve::line(center.clone(), normal.clone())?;
    Ok(p2.iter().filter(|p| axis.contains_point(p)).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{surface_pair_intersection, IntersectionResult};
    use std::collections::BTreeMap;

    fn brute_lines(inst: &Instance) -> usize {
        let mut n = 0;
        for p in &inst.points {
            for c in &inst.curves {
                if let Curve::Line { origin, direction } = c {
                    // p - origin parallel to direction
                    if p.sub(origin).cross(direction).is_zero() {
                        n += 1;
                    }
                }
            }
        }
        n
    }

    #[test]
    fn elekes_sizes_and_counts() {
        for (kk, m, n, i) in [(1u32, 2usize, 1usize, 1usize), (2, 16, 8, 16), (4, 128, 64, 256)] {
            let g = gen_elekes_grid(kk).unwrap();
            assert_eq!((g.points.len(), g.curves.len()), (m, n));
            assert_eq!(brute_lines(&g), i);
            assert_eq!(g.incidence_count(), i);
        }
        assert!(matches!(gen_elekes_grid(17), Err(Error::GuardExceeded(_))));
    }

    #[test]
    fn elekes_ratio() {
        let g = gen_elekes_grid(4).unwrap();
        let (m, n, i) = (g.points.len() as f64, g.curves.len() as f64, g.incidence_count() as f64);
        let r = i / (m * n).powf(2.0 / 3.0);
        assert!((r - 2f64.powf(-2.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn lift_identity_on_parabola() {
        let (a, b) = (q(0), q(0));
        let f = lift_surface_poly(&a, &b, &[q(1), q(0), q(0)]);
        let p = Point3::from_i64(1, 0, 1);
        assert!(lifted_parabola(&a, &b).unwrap().contains_point(&p));
        assert!(f.eval(&p).is_zero());
        let (a, b) = (Scalar::from_frac(3, 2), Scalar::from_frac(-1, 3));
        let w = [Scalar::from_frac(2, 7), q(-1), q(5)];
        let f = lift_surface_poly(&a, &b, &w);
        let gamma = lifted_parabola(&a, &b).unwrap();
        for i in 0..25 {
            let x = Scalar::from_frac(i - 12, 5);
            let y = a.clone() * x.clone() + b.clone();
            let p = lift_point(&x, &y);
            assert!(gamma.contains_point(&p));
            assert!(f.eval(&p).is_zero());
        }
    }

    #[test]
    fn lift_preserves_incidences() {
        let g = gen_elekes_grid(2).unwrap();
        let lifted = lift_planar_instance(&g, &[]).unwrap();
        assert_eq!(
            count_incidences(&lifted.points, &lifted.curves).0,
            brute_lines(&g)
        );
        let dup = [(q(1), q(1)), (q(1), q(1))];
        assert!(gen_paraboloid_lift(&dup, &[], &[]).is_err());
    }

    #[test]
    fn packing_multiplies_incidences() {
        let g = gen_elekes_grid(2).unwrap();
        let one = gen_packing_copies(&g, 1, 9).unwrap();
        assert_eq!(one.points, g.points);
        assert_eq!(one.curves, g.curves);
        let three = gen_packing_copies(&g, 3, 9).unwrap();
        assert_eq!(three.incidence_count(), 48);
        assert_eq!(three.points.len(), 48);
    }

    #[test]
    fn packing_reseeds_on_collision() {
        let g = gen_elekes_grid(2).unwrap();
        let mut calls = 0;
        let mut draw = |rng: &mut ChaCha8Rng| {
            calls += 1;
            if calls == 1 {
                // shifts a grid line onto another grid line
                Point3::from_i64(0, 1, 0)
            } else {
                random_translation(rng)
            }
        };
        let two = gen_packing_copies_from(&g, 2, 0, &mut draw).unwrap();
        assert_eq!(two.incidence_count(), 32);
        let shared: BTreeSet<&Point3> = two.points.iter().collect();
        assert_eq!(shared.len(), 32);
        assert!(matches!(
            pack_with_translations(&g, &[Point3::origin(), Point3::from_i64(0, 1, 0)]),
            Err(Error::GenericityFailure { .. })
        ));
    }

    #[test]
    fn stereographic_points() {
        let p = stereographic(&Point3::origin(), &q(1), &q(1), &q(0));
        assert_eq!(p, Point3::from_i64(1, 0, 0));
        let v = Variety::Sphere { center: Point3::from_i64(1, 2, 3), radius2: Scalar::from_frac(9, 4) };
        let inst = gen_random_on_variety(&v, 100, 4).unwrap();
        let s = v.surface().unwrap();
        assert!(inst.points.iter().all(|p| s.contains_point(p)));
        assert_eq!(inst.points.iter().collect::<BTreeSet<_>>().len(), 100);
        let bad = Variety::Sphere { center: Point3::origin(), radius2: q(2) };
        assert!(matches!(gen_random_on_variety(&bad, 3, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn paraboloid_and_plane_points() {
        let half = Scalar::from_frac(1, 2);
        assert_eq!(lift_point(&half, &half), Point3::new(half.clone(), half.clone(), half.clone()));
        for v in [
            Variety::Paraboloid,
            Variety::Plane { a: q(1), b: q(2), c: q(0), d: q(-3) },
            Variety::Plane { a: q(1), b: q(0), c: q(0), d: q(7) },
            Variety::Plane { a: q(1), b: q(1), c: q(1), d: q(1) },
        ] {
            let inst = gen_random_on_variety(&v, 100, 1).unwrap();
            let s = v.surface().unwrap();
            assert!(inst.points.iter().all(|p| s.contains_point(p)), "{v:?}");
            assert_eq!(inst.points.iter().collect::<BTreeSet<_>>().len(), 100);
        }
    }

    #[test]
    fn distance_spheres_small() {
        let (s, t) = gen_distance_spheres(&[Point3::origin()], &[Point3::from_i64(1, 0, 0)]).unwrap();
        assert_eq!((s.len(), t), (1, 1));
        assert_eq!(count_incidences(&[Point3::origin()], &s).0, 1);
        let p1 = [Point3::origin(), Point3::from_i64(2, 0, 0)];
        let (s, t) = gen_distance_spheres(&p1, &[Point3::from_i64(1, 0, 0)]).unwrap();
        assert_eq!((s.len(), t), (1, 1));
        assert_eq!(count_incidences(&p1, &s).0, 2);
        assert!(gen_distance_spheres(&p1, &p1[..1]).is_err());
    }

    #[test]
    fn distance_spheres_random() {
        let p1 = gen_random_on_variety(&Variety::Paraboloid, 30, 2).unwrap().points;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p2: Vec<Point3> = (0..20).map(|_| random_translation(&mut rng)).collect();
        let (s, t) = gen_distance_spheres(&p1, &p2).unwrap();
        assert_eq!(s.len(), 20 * t);
        let brute: usize = p1
            .iter()
            .map(|p| s.iter().filter(|sp| sp.contains_point(p)).count())
            .sum();
        assert_eq!(brute, 600);
        assert_eq!(count_incidences(&p1, &s).0, 600);
    }

    #[test]
    fn unit_spheres_count_twice() {
        let sq: Vec<Point3> = [(0, 0), (1, 0), (0, 1), (1, 1)].iter().map(|&(x, y)| Point3::from_i64(x, y, 0)).collect();
        assert_eq!(count_incidences(&sq, &gen_unit_spheres(&sq, &q(1)).unwrap()).0, 8);
        let line: Vec<Point3> = (0..4).map(|i| Point3::from_i64(i, 0, 0)).collect();
        assert_eq!(count_incidences(&line, &gen_unit_spheres(&line, &q(1)).unwrap()).0, 6);
        let grid: Vec<Point3> = (0..25).map(|i| Point3::from_i64(i % 5, i / 5, 0)).collect();
        let mut pairs = 0;
        for i in 0..grid.len() {
            for j in (i + 1)..grid.len() {
                if grid[i].dist2(&grid[j]) == q(1) {
                    pairs += 1;
                }
            }
        }
        assert_eq!(count_incidences(&grid, &gen_unit_spheres(&grid, &q(1)).unwrap()).0, 2 * pairs);
    }

    #[test]
    fn axis_multiplicity_examples() {
        let c = Curve::circle(Point3::origin(), Point3::from_i64(0, 0, 1), q(1)).unwrap();
        assert_eq!(circle_axis_multiplicity(&c, &[Point3::from_i64(0, 0, 5)]).unwrap(), 1);
        assert_eq!(circle_axis_multiplicity(&c, &[]).unwrap(), 0);
    }

    #[test]
    fn distance_circles_multiplicity() {
        let p1 = gen_random_on_variety(&Variety::Paraboloid, 12, 8).unwrap().points;
        let p2: Vec<Point3> = (0..6).map(|i| Point3::from_i64(0, 0, 3 * i - 7)).chain(
            [Point3::from_i64(5, 1, 2), Point3::from_i64(-3, 4, 1)],
        ).collect();
        let (spheres, t) = gen_distance_spheres(&p1, &p2).unwrap();
        let mut circles: BTreeMap<Curve, BTreeSet<usize>> = BTreeMap::new();
        for i in 0..spheres.len() {
            for j in (i + 1)..spheres.len() {
                if let IntersectionResult::CircleCurve(c) = surface_pair_intersection(&spheres[i], &spheres[j]) {
                    let e = circles.entry(c).or_default();
                    e.insert(i);
                    e.insert(j);
                }
            }
        }
        assert!(!circles.is_empty());
        for (c, members) in &circles {
            let axis = circle_axis_multiplicity(c, &p2).unwrap();
            // one sphere per center can hold a given circle
            assert!(members.len() <= axis, "{c:?}: {} vs axis {axis}", members.len());
            assert!(members.len() <= 2 * t);
        }
    }
}
