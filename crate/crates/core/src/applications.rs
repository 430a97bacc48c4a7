//! Distance counts and the circle reduction for similar triangles.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{collinear, sphere_sphere, IntersectionResult};
use crate::incidence::{coplanar_cospherical_max, count_incidences};
use crate::scalar::ExactField;
use crate::{Curve, Point3, Scalar, Surface};

fn require_distinct(points: &[Point3]) -> Result<()> {
    let s: BTreeSet<&Point3> = points.iter().collect();
    if s.len() != points.len() {
        return Err(Error::Precondition("points must be distinct".into()));
    }
    Ok(())
}

/// Distinct squared distances over unordered pairs.
pub fn distinct_distances(points: &[Point3]) -> Result<usize> {
    if points.len() < 2 {
        return Err(Error::Precondition("need at least two points".into()));
    }
    require_distinct(points)?;
    let sets: Vec<BTreeSet<Scalar>> = (0..points.len())
        .into_par_iter()
        .map(|i| points[i + 1..].iter().map(|q| points[i].dist2(q)).collect())
        .collect();
    Ok(sets.into_iter().flatten().collect::<BTreeSet<_>>().len())
}

/// Distinct squared distances over `p1 x p2`.
pub fn bipartite_distinct_distances(p1: &[Point3], p2: &[Point3]) -> Result<usize> {
    if p1.is_empty() || p2.is_empty() {
        return Err(Error::Precondition("both point sets must be nonempty".into()));
    }
    let sets: Vec<BTreeSet<Scalar>> = p1
        .par_iter()
        .map(|a| p2.iter().map(|b| a.dist2(b)).collect())
        .collect();
    Ok(sets.into_iter().flatten().collect::<BTreeSet<_>>().len())
}

/// Unordered pairs at squared distance exactly `d2`.
pub fn repeated_distances(points: &[Point3], d2: &Scalar) -> Result<usize> {
    if !d2.is_positive() {
        return Err(Error::OutOfRange(format!("d2 = {d2} must be positive")));
    }
    Ok((0..points.len())
        .into_par_iter()
        .map(|i| points[i + 1..].iter().filter(|q| points[i].dist2(q) == *d2).count())
        .sum())
}

/// Reference triangle `abc` up to similarity, by squared side ratios
/// `rho1 = |ac|^2 / |ab|^2` and `rho2 = |bc|^2 / |ab|^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleShape {
    #[serde(serialize_with = "ser_scalar")]
    pub rho1: Scalar,
    #[serde(serialize_with = "ser_scalar")]
    pub rho2: Scalar,
}

fn ser_scalar<S: serde::Serializer>(v: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
    crate::io::scalar_string::serialize(v, s)
}

/// `16 area^2` of a triangle with squared sides `a, b, c`.
fn heron16(a: &Scalar, b: &Scalar, c: &Scalar) -> Scalar {
    let two = Scalar::from_i64(2);
    two * (a.clone() * b.clone() + b.clone() * c.clone() + c.clone() * a.clone())
        - a.clone() * a.clone()
        - b.clone() * b.clone()
        - c.clone() * c.clone()
}

impl TriangleShape {
    pub fn new(rho1: Scalar, rho2: Scalar) -> Result<Self> {
        if !rho1.is_positive() || !rho2.is_positive() {
            return Err(Error::DegenerateShape);
        }
        if !heron16(&Scalar::from_i64(1), &rho1, &rho2).is_positive() {
            return Err(Error::DegenerateShape);
        }
        Ok(TriangleShape { rho1, rho2 })
    }

    pub fn equilateral() -> Self {
        Self::new(Scalar::from_i64(1), Scalar::from_i64(1)).expect("equilateral")
    }

    /// Right angle at `a`, legs `ab` and `ac`.
    pub fn right_isosceles() -> Self {
        Self::new(Scalar::from_i64(1), Scalar::from_i64(2)).expect("right isosceles")
    }

    /// Does `(p, q, r) -> (a, b, c)` realize the shape? Division free.
    fn matches(&self, pq: &Scalar, pr: &Scalar, qr: &Scalar) -> bool {
        *pr == self.rho1.clone() * pq.clone() && *qr == self.rho2.clone() * pq.clone()
    }
}

/// For each ordered pair `(p, q)`, the circle of points `r` making `pqr`
/// similar to the shape, deduplicated, with the number of ordered pairs
/// producing each circle.
pub fn triangle_circles(points: &[Point3], shape: &TriangleShape) -> Result<Vec<(Curve, usize)>> {
    Ok(circle_pairs(points, shape)?.into_iter().map(|(c, v)| (c, v.len())).collect())
}

/// Triangle circles with the ordered index pairs producing them.
fn circle_pairs(points: &[Point3], shape: &TriangleShape) -> Result<BTreeMap<Curve, Vec<(usize, usize)>>> {
    if points.len() < 2 {
        return Err(Error::Precondition("need at least two points".into()));
    }
    let per_p: Vec<Vec<(Curve, (usize, usize))>> = (0..points.len())
        .into_par_iter()
        .map(|i| {
            let p = &points[i];
            (0..points.len())
                .filter(|&j| points[j] != *p)
                .filter_map(|j| {
                    let q = &points[j];
                    let d2 = p.dist2(q);
                    let ra = shape.rho1.clone() * d2.clone();
                    let rb = shape.rho2.clone() * d2;
                    match sphere_sphere(p, &ra, q, &rb) {
                        IntersectionResult::CircleCurve(c) => Some((c, (i, j))),
                        _ => None,
                    }
                })
                .collect()
        })
        .collect();
    let mut out: BTreeMap<Curve, Vec<(usize, usize)>> = BTreeMap::new();
    for (c, pair) in per_p.into_iter().flatten() {
        out.entry(c).or_default().push(pair);
    }
    Ok(out)
}

fn check_triangle_input(points: &[Point3]) -> Result<()> {
    if points.len() < 3 {
        return Err(Error::Precondition("need at least three points".into()));
    }
    require_distinct(points)
}

/// Unordered non-collinear triples similar to the shape under some vertex
/// correspondence (mirror images included).
pub fn similar_triangles_bruteforce(points: &[Point3], shape: &TriangleShape) -> Result<usize> {
    check_triangle_input(points)?;
    let n = points.len();
    Ok((0..n)
        .into_par_iter()
        .map(|i| {
            let mut count = 0;
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let (a, b, c) = (&points[i], &points[j], &points[k]);
                    if collinear(a, b, c) {
                        continue;
                    }
                    let (ab, ac, bc) = (a.dist2(b), a.dist2(c), b.dist2(c));
                    // (p, q, r) as each permutation of (a, b, c)
                    let hit = shape.matches(&ab, &ac, &bc)
                        || shape.matches(&ab, &bc, &ac)
                        || shape.matches(&ac, &ab, &bc)
                        || shape.matches(&ac, &bc, &ab)
                        || shape.matches(&bc, &ab, &ac)
                        || shape.matches(&bc, &ac, &ab);
                    count += hit as usize;
                }
            }
            count
        })
        .sum())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TriangleCensus {
    pub count_bruteforce: usize,
    /// Triangles recovered from the circle incidences.
    pub count_pipeline: usize,
    #[serde(skip)]
    pub circles: Vec<(Curve, usize)>,
    pub num_circles: usize,
    pub incidences: usize,
    pub max_multiplicity: usize,
    /// Most circles on one plane or sphere.
    pub q: usize,
    #[serde(skip)]
    pub q_witness: Option<Surface>,
    /// `3 count <= 2 incidences`.
    pub two_thirds_holds: bool,
    /// Every circle comes from at most two ordered pairs.
    pub multiplicity_holds: bool,
    /// `q <= 2 n`.
    pub q_linear_holds: bool,
}

/// The circle reduction next to the brute-force count, with the
/// inequalities linking them evaluated (not assumed).
pub fn similar_triangles_via_incidences(points: &[Point3], shape: &TriangleShape) -> Result<TriangleCensus> {
    check_triangle_input(points)?;
    let count_bruteforce = similar_triangles_bruteforce(points, shape)?;
    let pairs = circle_pairs(points, shape)?;
    let curves: Vec<Curve> = pairs.keys().cloned().collect();
    let (incidences, graph) = count_incidences(points, &curves);
    let pair_lists: Vec<&Vec<(usize, usize)>> = pairs.values().collect();
    let mut triangles = BTreeSet::new();
    for &(r, ci) in &graph.edges {
        for &(p, q) in pair_lists[ci] {
            let mut t = [p, q, r];
            t.sort_unstable();
            triangles.insert(t);
        }
    }
    let circles: Vec<(Curve, usize)> = pairs.into_iter().map(|(c, v)| (c, v.len())).collect();
    let max_multiplicity = circles.iter().map(|(_, m)| *m).max().unwrap_or(0);
    let (q, q_witness) = coplanar_cospherical_max(&curves)?;
    Ok(TriangleCensus {
        count_bruteforce,
        count_pipeline: triangles.len(),
        num_circles: circles.len(),
        circles,
        incidences,
        max_multiplicity,
        q,
        q_witness,
        two_thirds_holds: 3 * count_bruteforce <= 2 * incidences,
        multiplicity_holds: max_multiplicity <= 2,
        q_linear_holds: q <= 2 * points.len(),
    })
}

/// Each similar triangle puts at least one of its vertices on a circle of
/// another two, so the count never exceeds the incidences.
pub fn incidences_cover_triangles(census: &TriangleCensus) -> bool {
    census.count_bruteforce <= census.incidences
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_frac(n, d)
    }

    fn square() -> Vec<Point3> {
        [(0, 0), (1, 0), (0, 1), (1, 1)].iter().map(|&(x, y)| Point3::from_i64(x, y, 0)).collect()
    }

    fn brute_distinct(points: &[Point3]) -> usize {
        let mut v = Vec::new();
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                let d = points[i].dist2(&points[j]);
                if !v.contains(&d) {
                    v.push(d);
                }
            }
        }
        v.len()
    }

    #[test]
    fn distance_examples() {
        let line: Vec<Point3> = (0..5).map(|i| Point3::from_i64(i, 0, 0)).collect();
        assert_eq!(distinct_distances(&line).unwrap(), 4);
        assert_eq!(distinct_distances(&square()).unwrap(), 2);
        assert_eq!(
            bipartite_distinct_distances(&[Point3::origin()], &[Point3::from_i64(1, 0, 0), Point3::from_i64(0, 2, 0)]).unwrap(),
            2
        );
        assert_eq!(repeated_distances(&square(), &q(1, 1)).unwrap(), 4);
        assert_eq!(repeated_distances(&square(), &q(2, 1)).unwrap(), 2);
        let grid: Vec<Point3> = (0..16).map(|i| Point3::from_i64(i % 4, i / 4, 0)).collect();
        assert_eq!(repeated_distances(&grid, &q(1, 1)).unwrap(), 24);
        assert!(distinct_distances(&line[..1]).is_err());
        assert!(repeated_distances(&line, &q(0, 1)).is_err());
    }

    #[test]
    fn distinct_matches_double_loop() {
        use crate::constructions::{gen_random_on_variety, Variety};
        let pts = gen_random_on_variety(&Variety::Paraboloid, 50, 6).unwrap().points;
        assert_eq!(distinct_distances(&pts).unwrap(), brute_distinct(&pts));
    }

    #[test]
    fn shape_validation() {
        assert!(TriangleShape::new(q(1, 1), q(4, 1)).is_err()); // collinear 1 + 1 = 2
        assert!(TriangleShape::new(q(0, 1), q(1, 1)).is_err());
        assert!(TriangleShape::new(q(1, 4), q(1, 4)).is_err()); // 1/2 + 1/2 = 1
        assert!(TriangleShape::new(q(5, 1), q(2, 1)).is_ok());
    }

    #[test]
    fn locus_circles() {
        let p = [Point3::origin(), Point3::from_i64(1, 0, 0)];
        let eq = triangle_circles(&p, &TriangleShape::equilateral()).unwrap();
        assert_eq!(
            eq,
            vec![(Curve::circle(Point3::new(q(1, 2), q(0, 1), q(0, 1)), Point3::from_i64(1, 0, 0), q(3, 4)).unwrap(), 2)]
        );
        let ri = triangle_circles(&p, &TriangleShape::right_isosceles()).unwrap();
        let at_p = Curve::circle(Point3::origin(), Point3::from_i64(1, 0, 0), q(1, 1)).unwrap();
        assert!(ri.contains(&(at_p, 1)));
    }

    #[test]
    fn brute_force_examples() {
        let tri = [Point3::origin(), Point3::from_i64(1, 1, 0), Point3::from_i64(1, 0, 1)];
        assert_eq!(similar_triangles_bruteforce(&tri, &TriangleShape::equilateral()).unwrap(), 1);
        assert_eq!(similar_triangles_bruteforce(&square(), &TriangleShape::right_isosceles()).unwrap(), 4);
        let line: Vec<Point3> = (0..4).map(|i| Point3::from_i64(i, 0, 0)).collect();
        assert_eq!(similar_triangles_bruteforce(&line, &TriangleShape::equilateral()).unwrap(), 0);
    }

    #[test]
    fn square_pipeline() {
        let c = similar_triangles_via_incidences(&square(), &TriangleShape::right_isosceles()).unwrap();
        assert_eq!(c.count_bruteforce, 4);
        assert_eq!(c.count_pipeline, 4);
        assert_eq!(c.incidences, 8);
        assert!(c.two_thirds_holds && c.multiplicity_holds && c.q_linear_holds);
    }

    #[test]
    fn exact_triangle_pipeline() {
        let tri = [Point3::origin(), Point3::from_i64(1, 1, 0), Point3::from_i64(1, 0, 1)];
        let c = similar_triangles_via_incidences(&tri, &TriangleShape::equilateral()).unwrap();
        assert_eq!(c.count_bruteforce, 1);
        assert!(c.incidences >= 2);
        assert!(c.two_thirds_holds);
        assert_eq!(c.max_multiplicity, 2);
    }

    #[test]
    fn scalene_triangle_has_one_incidence() {
        // squared sides 1, 5, 2: only one ordered base pair realizes it
        let tri = [Point3::origin(), Point3::from_i64(1, 0, 0), Point3::from_i64(2, 1, 0)];
        let shape = TriangleShape::new(q(5, 1), q(2, 1)).unwrap();
        let c = similar_triangles_via_incidences(&tri, &shape).unwrap();
        assert_eq!((c.count_bruteforce, c.incidences), (1, 1));
        assert!(!c.two_thirds_holds);
        assert!(incidences_cover_triangles(&c));
    }
}
