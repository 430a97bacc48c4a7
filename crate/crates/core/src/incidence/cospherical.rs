use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::geom::{curve_pair_intersection, Curve, Point3, Surface};
use crate::scalar::ExactField;

/// Largest number of the given circles contained in one plane or sphere,
/// with a witness surface. Empty input gives `(0, None)`.
///
/// Spheres through a circle are centred on its axis, so a sphere holding
/// two circles is centred where their axes meet (or, for a shared axis, at
/// the unique point equalizing the two radii).
pub fn coplanar_cospherical_max<F: ExactField>(
    circles: &[Curve<F>],
) -> Result<(usize, Option<Surface<F>>)> {
    struct Info<F> {
        center: Point3<F>,
        normal: Point3<F>,
        radius2: F,
    }
    let mut info = Vec::with_capacity(circles.len());
    for c in circles {
        match c.canonicalize() {
            Curve::Circle { center, normal, radius2 } => info.push(Info { center, normal, radius2 }),
            other => {
                return Err(Error::Precondition(format!("expected a circle, got {other:?}")))
            }
        }
    }

    let mut best: (usize, Option<Surface<F>>) = (0, None);
    let mut planes: BTreeMap<Surface<F>, usize> = BTreeMap::new();
    for c in circles {
        *planes.entry(c.supporting_plane().expect("circle")).or_default() += 1;
    }
    for (p, k) in planes {
        if k > best.0 {
            best = (k, Some(p));
        }
    }

    // Group circles by axis line.
    let mut axes: BTreeMap<Curve<F>, Vec<usize>> = BTreeMap::new();
    for (i, c) in info.iter().enumerate() {
        let axis = Curve::line(c.center.clone(), c.normal.clone()).expect("nonzero normal");
        axes.entry(axis).or_default().push(i);
    }
    let axes: Vec<(Curve<F>, Vec<usize>)> = axes.into_iter().collect();

    let mut spheres: BTreeMap<Surface<F>, BTreeSet<usize>> = BTreeMap::new();
    let add = |center: Point3<F>, members: &[usize], spheres: &mut BTreeMap<Surface<F>, BTreeSet<usize>>| {
        for &i in members {
            let c = &info[i];
            let r2 = center.dist2(&c.center) + c.radius2.clone();
            let s = Surface::Sphere { center: center.clone(), radius2: r2 };
            spheres.entry(s).or_default().insert(i);
        }
    };

    // Shared axis: the sphere center solving |X - c_i|^2 + r_i equal for a pair.
    for (_, members) in &axes {
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                let (ci, cj) = (&info[i], &info[j]);
                let n = &ci.normal;
                let nn = n.norm2();
                let w = ci.center.sub(&cj.center);
                // w = mu n
                let mu = w.dot(n) / nn.clone();
                if mu.is_zero() {
                    continue;
                }
                let two = F::from_i64(2);
                let lam = (ci.radius2.clone() - cj.radius2.clone() - mu.clone() * mu.clone() * nn.clone())
                    / (two * mu * nn);
                let center = ci.center.add(&n.scale(&lam));
                add(center, &[i, j], &mut spheres);
            }
        }
    }

    // Distinct axes meeting at a point: every circle on either axis belongs
    // to exactly one sphere centred there.
    let approx: Vec<([f64; 3], [f64; 3])> = axes.iter().map(|(l, _)| approx_line(l)).collect();
    let mut centers: BTreeMap<Point3<F>, BTreeSet<usize>> = BTreeMap::new();
    for a in 0..axes.len() {
        for b in (a + 1)..axes.len() {
            if clearly_skew(&approx[a], &approx[b]) {
                continue;
            }
            if let Ok(pts) = curve_pair_intersection(&axes[a].0, &axes[b].0) {
                for x in pts {
                    let e = centers.entry(x).or_default();
                    e.insert(a);
                    e.insert(b);
                }
            }
        }
    }
    for (x, axis_ids) in centers {
        let members: Vec<usize> = axis_ids.iter().flat_map(|&a| axes[a].1.iter().copied()).collect();
        add(x, &members, &mut spheres);
    }

    for (s, members) in spheres {
        if members.len() > best.0 {
            debug_assert!(members.iter().all(|&i| circles[i].lies_in(&s).unwrap_or(false)));
            let verified = members
                .iter()
                .filter(|&&i| circles[i].lies_in(&s).unwrap_or(false))
                .count();
            if verified > best.0 {
                best = (verified, Some(s));
            }
        }
    }
    Ok(best)
}

fn approx_line<F: ExactField>(l: &Curve<F>) -> ([f64; 3], [f64; 3]) {
    let Curve::Line { origin, direction } = l else { unreachable!("axes are lines") };
    let f = |p: &Point3<F>| [p.x.to_f64(), p.y.to_f64(), p.z.to_f64()];
    (f(origin), f(direction))
}

/// Float screen for the exact intersection: `true` only when the lines are
/// far from parallel and their distance dwarfs the rounding error.
fn clearly_skew(a: &([f64; 3], [f64; 3]), b: &([f64; 3], [f64; 3])) -> bool {
    let (o1, d1) = a;
    let (o2, d2) = b;
    let cr = [
        d1[1] * d2[2] - d1[2] * d2[1],
        d1[2] * d2[0] - d1[0] * d2[2],
        d1[0] * d2[1] - d1[1] * d2[0],
    ];
    let norm = |v: &[f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let nc = norm(&cr);
    let scale_d = norm(d1) * norm(d2);
    if !(nc > 1e-6 * scale_d) {
        return false;
    }
    let w = [o2[0] - o1[0], o2[1] - o1[1], o2[2] - o1[2]];
    let dist = (w[0] * cr[0] + w[1] * cr[1] + w[2] * cr[2]).abs() / nc;
    let scale = 1.0 + norm(o1) + norm(o2);
    dist.is_finite() && dist > 1e-6 * scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_frac(n, d)
    }

    #[test]
    fn five_coplanar() {
        let cs: Vec<Curve<Q>> = (1..=5)
            .map(|i| Curve::circle(Point3::from_i64(i, 2 * i, 0), Point3::from_i64(0, 0, 1), q(i, 1)).unwrap())
            .collect();
        let (k, w) = coplanar_cospherical_max(&cs).unwrap();
        assert_eq!(k, 5);
        assert_eq!(w, Some(Surface::plane(q(0, 1), q(0, 1), q(1, 1), q(0, 1)).unwrap()));
    }

    #[test]
    fn two_sections_of_unit_sphere() {
        let cs = vec![
            Curve::circle(Point3::new(q(0, 1), q(0, 1), q(1, 2)), Point3::from_i64(0, 0, 1), q(3, 4)).unwrap(),
            Curve::circle(Point3::new(q(0, 1), q(0, 1), q(-1, 2)), Point3::from_i64(0, 0, 1), q(3, 4)).unwrap(),
        ];
        let (k, w) = coplanar_cospherical_max(&cs).unwrap();
        assert_eq!(k, 2);
        assert_eq!(w, Some(Surface::sphere(Point3::origin(), q(1, 1)).unwrap()));
    }

    #[test]
    fn crossing_axes() {
        // great circles of the sphere |x|^2 = 9 in three coordinate planes,
        // plus a small circle off the sphere
        let mut cs: Vec<Curve<Q>> = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]
            .iter()
            .map(|&(a, b, c)| Curve::circle(Point3::origin(), Point3::from_i64(a, b, c), q(9, 1)).unwrap())
            .collect();
        cs.push(Curve::circle(Point3::from_i64(4, 4, 4), Point3::from_i64(1, 0, 0), q(1, 1)).unwrap());
        let (k, w) = coplanar_cospherical_max(&cs).unwrap();
        assert_eq!(k, 4);
        assert_eq!(w, Some(Surface::sphere(Point3::origin(), q(9, 1)).unwrap()));
    }

    #[test]
    fn single_and_empty() {
        let c = Curve::<Q>::circle(Point3::origin(), Point3::from_i64(1, 2, 3), q(2, 1)).unwrap();
        assert_eq!(coplanar_cospherical_max(&[c]).unwrap().0, 1);
        assert_eq!(coplanar_cospherical_max::<Q>(&[]).unwrap(), (0, None));
    }
}
