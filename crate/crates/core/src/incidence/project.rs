//! Generic linear projection of a point-curve configuration to the plane.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::{Curve, Point3};
use crate::scalar::ExactField;

/// Retries allowed before reporting a genericity failure.
pub const PROJECTION_ATTEMPTS: u32 = 16;

/// A planar curve in the image plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlanarCurve<F> {
    /// `a x + b y + c = 0`.
    Line { a: F, b: F, c: F },
    /// `c0 x^2 + c1 x y + c2 y^2 + c3 x + c4 y + c5 = 0`.
    Conic { coeffs: [F; 6] },
}

impl<F: ExactField> PlanarCurve<F> {
    pub fn contains(&self, p: &[F; 2]) -> bool {
        let [x, y] = p;
        match self {
            PlanarCurve::Line { a, b, c } => {
                (a.clone() * x.clone() + b.clone() * y.clone() + c.clone()).is_zero()
            }
            PlanarCurve::Conic { coeffs: k } => (k[0].clone() * x.clone() * x.clone()
                + k[1].clone() * x.clone() * y.clone()
                + k[2].clone() * y.clone() * y.clone()
                + k[3].clone() * x.clone()
                + k[4].clone() * y.clone()
                + k[5].clone())
            .is_zero(),
        }
    }

    fn coefficients(&self) -> Vec<F> {
        match self {
            PlanarCurve::Line { a, b, c } => vec![a.clone(), b.clone(), c.clone()],
            PlanarCurve::Conic { coeffs } => coeffs.to_vec(),
        }
    }

    /// Coefficients scaled so the first nonzero one is 1.
    fn normalized(&self) -> Vec<F> {
        let c = self.coefficients();
        match c.iter().find(|v| !v.is_zero()).cloned() {
            Some(lead) => c.into_iter().map(|v| v / lead.clone()).collect(),
            None => c,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PlanarInstance<F: ExactField> {
    pub points2: Vec<[F; 2]>,
    pub curves2: Vec<PlanarCurve<F>>,
    /// Index of the source point / curve for each image.
    pub point_ids: Vec<usize>,
    pub curve_ids: Vec<usize>,
    /// The linear map applied before dropping the third coordinate.
    pub matrix: [[F; 3]; 3],
    /// Number of maps drawn, including the accepted one.
    pub attempts: u32,
}

impl<F: ExactField> PlanarInstance<F> {
    pub fn incidence_count(&self) -> usize {
        self.points2
            .iter()
            .map(|p| self.curves2.iter().filter(|c| c.contains(p)).count())
            .sum()
    }
}

type Mat<F> = [[F; 3]; 3];

fn mat_vec<F: ExactField>(m: &Mat<F>, v: &Point3<F>) -> Point3<F> {
    let r = |i: usize| {
        m[i][0].clone() * v.x.clone() + m[i][1].clone() * v.y.clone() + m[i][2].clone() * v.z.clone()
    };
    Point3::new(r(0), r(1), r(2))
}

fn transpose<F: ExactField>(m: &Mat<F>) -> Mat<F> {
    std::array::from_fn(|i| std::array::from_fn(|j| m[j][i].clone()))
}

fn inverse<F: ExactField>(m: &Mat<F>) -> Option<Mat<F>> {
    let c = |i: usize, j: usize| m[i % 3][j % 3].clone();
    // cofactor (i, j) via cyclic indices
    let cof = |i: usize, j: usize| {
        c(i + 1, j + 1) * c(i + 2, j + 2) - c(i + 1, j + 2) * c(i + 2, j + 1)
    };
    let det = m[0][0].clone() * cof(0, 0) + m[0][1].clone() * cof(0, 1) + m[0][2].clone() * cof(0, 2);
    if det.is_zero() {
        return None;
    }
    Some(std::array::from_fn(|i| {
        std::array::from_fn(|j| cof(j, i) / det.clone())
    }))
}

fn project_curve<F: ExactField>(m: &Mat<F>, inv: &Mat<F>, c: &Curve<F>) -> Option<PlanarCurve<F>> {
    match c {
        Curve::Line { origin, direction } => {
            let o = mat_vec(m, origin);
            let d = mat_vec(m, direction);
            if d.x.is_zero() && d.y.is_zero() {
                return None;
            }
            let a = -d.y.clone();
            let b = d.x.clone();
            let cc = -(a.clone() * o.x.clone() + b.clone() * o.y.clone());
            Some(PlanarCurve::Line { a, b, c: cc })
        }
        Curve::Circle { center, normal, radius2 } => {
            // x = inv (X, Y, Z); plane n . x = n . center becomes mv . (X, Y, Z) = h.
            let mv = mat_vec(&transpose(inv), normal);
            if mv.z.is_zero() {
                return None;
            }
            let h = normal.dot(center);
            let col = |j: usize| Point3::new(inv[0][j].clone(), inv[1][j].clone(), inv[2][j].clone());
            let (b1, b2, b3) = (col(0), col(1), col(2));
            // Z = (h - m1 X - m2 Y) / m3
            let a0 = b3.scale(&(h / mv.z.clone()));
            let a1 = b1.sub(&b3.scale(&(mv.x.clone() / mv.z.clone())));
            let a2 = b2.sub(&b3.scale(&(mv.y.clone() / mv.z.clone())));
            let u = a0.sub(center);
            let two = F::from_i64(2);
            Some(PlanarCurve::Conic {
                coeffs: [
                    a1.norm2(),
                    two.clone() * a1.dot(&a2),
                    a2.norm2(),
                    two.clone() * u.dot(&a1),
                    two * u.dot(&a2),
                    u.norm2() - radius2.clone(),
                ],
            })
        }
        Curve::ImplicitPair { .. } => None,
    }
}

/// Projects through a seeded random invertible integer map, keeping the
/// first two coordinates, and validates that points stay distinct,
/// incidences and non-incidences are preserved, and no two curve images
/// coincide.
pub fn project_generic<F: ExactField>(
    points: &[Point3<F>],
    curves: &[Curve<F>],
    seed: u64,
) -> Result<PlanarInstance<F>> {
    if let Some(c) = curves.iter().find(|c| matches!(c, Curve::ImplicitPair { .. })) {
        return Err(Error::Unsupported(format!("projection of {c:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reason = String::from("no attempt made");
    for attempt in 1..=PROJECTION_ATTEMPTS {
        let m: Mat<F> =
            std::array::from_fn(|_| std::array::from_fn(|_| F::from_i64(rng.gen_range(-5..=5))));
        let Some(inv) = inverse(&m) else {
            reason = "singular map".into();
            continue;
        };
        match try_projection(points, curves, &m, &inv) {
            Ok((points2, curves2)) => {
                return Ok(PlanarInstance {
                    points2,
                    curves2,
                    point_ids: (0..points.len()).collect(),
                    curve_ids: (0..curves.len()).collect(),
                    matrix: m,
                    attempts: attempt,
                })
            }
            Err(r) => reason = r,
        }
    }
    Err(Error::GenericityFailure { attempts: PROJECTION_ATTEMPTS, reason })
}

type Projected<F> = (Vec<[F; 2]>, Vec<PlanarCurve<F>>);

fn try_projection<F: ExactField>(
    points: &[Point3<F>],
    curves: &[Curve<F>],
    m: &Mat<F>,
    inv: &Mat<F>,
) -> std::result::Result<Projected<F>, String> {
    let points2: Vec<[F; 2]> = points
        .iter()
        .map(|p| {
            let q = mat_vec(m, p);
            [q.x, q.y]
        })
        .collect();
    let distinct: BTreeSet<&[F; 2]> = points2.iter().collect();
    if distinct.len() != points2.len() {
        return Err("two points share an image".into());
    }
    let mut curves2 = Vec::with_capacity(curves.len());
    for c in curves {
        curves2.push(project_curve(m, inv, c).ok_or("a curve degenerates under the map")?);
    }
    let images: BTreeSet<Vec<F>> = curves2.iter().map(|c| c.normalized()).collect();
    if images.len() != curves2.len() {
        return Err("two curves share an image".into());
    }
    for (p, p2) in points.iter().zip(&points2) {
        for (c, c2) in curves.iter().zip(&curves2) {
            if c.contains_point(p) != c2.contains(p2) {
                return Err("incidence not preserved".into());
            }
        }
    }
    Ok((points2, curves2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn single_incident_line() {
        let p = vec![Point3::<Q>::from_i64(2, 0, 0)];
        let l = vec![Curve::line(Point3::origin(), Point3::from_i64(1, 0, 0)).unwrap()];
        let inst = project_generic(&p, &l, 7).unwrap();
        assert_eq!(inst.incidence_count(), 1);
    }

    #[test]
    fn vertical_pair_separated() {
        let p = vec![Point3::<Q>::from_i64(1, 1, 0), Point3::from_i64(1, 1, 3)];
        let inst = project_generic(&p, &[], 0).unwrap();
        assert_ne!(inst.points2[0], inst.points2[1]);
    }

    #[test]
    fn circles_map_to_conics_through_images() {
        let c = Curve::<Q>::circle(Point3::origin(), Point3::from_i64(0, 0, 1), BigRational::from_i64(25))
            .unwrap();
        let pts = vec![
            Point3::from_i64(3, 4, 0),
            Point3::from_i64(-5, 0, 0),
            Point3::from_i64(0, 5, 0),
            Point3::from_i64(1, 1, 0),
            Point3::from_i64(3, 4, 1),
        ];
        let inst = project_generic(&pts, &[c], 3).unwrap();
        assert_eq!(inst.incidence_count(), 3);
    }

    #[test]
    fn inverse_is_exact() {
        let m: Mat<Q> = [[2, 1, 0], [0, 1, -1], [1, 0, 3]].map(|r| r.map(Q::from_i64));
        let inv = inverse(&m).unwrap();
        let v = Point3::from_i64(5, -7, 2);
        assert_eq!(mat_vec(&inv, &mat_vec(&m, &v)), v);
    }
}
