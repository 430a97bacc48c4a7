use std::collections::BTreeSet;

use inclab::applications::{distinct_distances, similar_triangles_via_incidences, TriangleShape};
use inclab::bounds::{eval_bound, fit_exponent, BoundFormula, FormulaName};
use inclab::constructions::{gen_distance_spheres, gen_unit_spheres};
use inclab::incidence::{count_incidences, decompose};
use inclab::io::{
    curves_to_json, format_scalar, objects_from_json, parse_scalar, partition_from_json, partition_to_json,
    points_from_csv, points_to_csv, split_objects, surfaces_to_json,
};
use inclab::partition::{build_partition, cell_census, crossing_census, round_ratio};
use inclab::{Curve, ExactField, Point3, Scalar, Surface};
use num_traits::Zero;
use proptest::collection::{btree_set, vec};
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = Scalar> {
    (-10_000i64..10_000, 1i64..500).prop_map(|(n, d)| Scalar::from_frac(n, d))
}

fn point() -> impl Strategy<Value = Point3> {
    (scalar(), scalar(), scalar()).prop_map(|(x, y, z)| Point3::new(x, y, z))
}

/// Distinct small integer points, so that coincidences actually happen.
fn grid_points(max: usize) -> impl Strategy<Value = Vec<Point3>> {
    btree_set((0i64..4, 0i64..4, 0i64..3), 3..max)
        .prop_map(|s| s.into_iter().map(|(x, y, z)| Point3::from_i64(x, y, z)).collect())
}

fn sphere() -> impl Strategy<Value = Surface> {
    ((0i64..4, 0i64..4, 0i64..3), 1i64..6)
        .prop_map(|((x, y, z), r)| Surface::sphere(Point3::from_i64(x, y, z), Scalar::from_i64(r)).unwrap())
}

fn plane() -> impl Strategy<Value = Surface> {
    (-2i64..=2, -2i64..=2, 1i64..=2, -4i64..=4).prop_map(|(a, b, c, d)| {
        Surface::plane(Scalar::from_i64(a), Scalar::from_i64(b), Scalar::from_i64(c), Scalar::from_i64(d)).unwrap()
    })
}

fn brute(points: &[Point3], surfaces: &[Surface]) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for (i, p) in points.iter().enumerate() {
        for (j, s) in surfaces.iter().enumerate() {
            if s.defining_poly().eval(p).is_zero() {
                out.insert((i, j));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scalar_strings_round_trip(v in scalar()) {
        prop_assert_eq!(parse_scalar(&format_scalar(&v)).unwrap(), v);
    }

    #[test]
    fn points_csv_round_trip(pts in vec(point(), 0..20)) {
        prop_assert_eq!(points_from_csv(&points_to_csv(&pts)).unwrap(), pts);
    }

    #[test]
    fn objects_json_round_trip(c in point(), r in 1i64..50, n in point(), o in point()) {
        let s = vec![Surface::sphere(c.clone(), Scalar::from_i64(r)).unwrap()];
        let (_, back) = split_objects(objects_from_json(&surfaces_to_json(&s)).unwrap());
        prop_assert_eq!(back, s);
        if !n.is_zero() {
            let curves = vec![
                Curve::line(o.clone(), n.clone()).unwrap(),
                Curve::circle(c, n, Scalar::from_i64(r)).unwrap(),
            ];
            let (back, _) = split_objects(objects_from_json(&curves_to_json(&curves)).unwrap());
            prop_assert_eq!(back, curves);
        }
    }

    #[test]
    fn incidences_match_double_loop(pts in grid_points(30), spheres in vec(sphere(), 1..8), planes in vec(plane(), 0..6)) {
        let mut surfaces = spheres;
        surfaces.extend(planes);
        let (n, g) = count_incidences(&pts, &surfaces);
        let oracle = brute(&pts, &surfaces);
        prop_assert_eq!(n, oracle.len());
        prop_assert_eq!(g.edges, oracle);
    }

    #[test]
    fn decomposition_reproduces_graph(pts in grid_points(30), spheres in vec(sphere(), 1..10), planes in vec(plane(), 0..6)) {
        let mut seen = BTreeSet::new();
        let mut surfaces: Vec<Surface> = spheres.into_iter().chain(planes).collect();
        surfaces.retain(|s| seen.insert(s.canonicalize()));
        let d = decompose(&pts, &surfaces).unwrap();
        prop_assert_eq!(d.covered_edges(), brute(&pts, &surfaces));
        for c in &d.components {
            prop_assert!(c.s_ids.len() >= 2);
            for &s in &c.s_ids {
                prop_assert!(c.gamma.lies_in(&surfaces[s]).unwrap());
            }
        }
    }

    #[test]
    fn unit_sphere_incidences_twice_pairs(pts in grid_points(40), r in 1i64..4) {
        let spheres = gen_unit_spheres(&pts, &Scalar::from_i64(r)).unwrap();
        let pairs = (0..pts.len())
            .flat_map(|i| (i + 1..pts.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| pts[i].dist2(&pts[j]) == Scalar::from_i64(r))
            .count();
        prop_assert_eq!(count_incidences(&pts, &spheres).0, 2 * pairs);
    }

    #[test]
    fn distance_spheres_give_mn(p1 in vec(point(), 1..10), p2 in vec(point(), 1..6)) {
        let a: BTreeSet<Point3> = p1.into_iter().collect();
        let b: BTreeSet<Point3> = p2.into_iter().filter(|p| !a.contains(p)).collect();
        prop_assume!(!b.is_empty());
        let (a, b): (Vec<Point3>, Vec<Point3>) = (a.into_iter().collect(), b.into_iter().collect());
        let (spheres, _) = gen_distance_spheres(&a, &b).unwrap();
        prop_assert_eq!(count_incidences(&a, &spheres).0, a.len() * b.len());
    }

    #[test]
    fn distinct_distances_match_set(pts in grid_points(25)) {
        let mut set = BTreeSet::new();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                set.insert(pts[i].dist2(&pts[j]));
            }
        }
        prop_assert_eq!(distinct_distances(&pts).unwrap(), set.len());
    }

    #[test]
    fn triangle_pipeline_invariants(pts in grid_points(14), which in 0usize..3) {
        let shape = match which {
            0 => TriangleShape::equilateral(),
            1 => TriangleShape::right_isosceles(),
            _ => TriangleShape::new(Scalar::from_i64(5), Scalar::from_i64(2)).unwrap(),
        };
        let c = similar_triangles_via_incidences(&pts, &shape).unwrap();
        prop_assert_eq!(c.count_bruteforce, c.count_pipeline);
        prop_assert!(c.count_bruteforce <= c.incidences);
        prop_assert!(c.max_multiplicity <= 2);
        prop_assert!(c.q <= 2 * pts.len());
    }

    #[test]
    fn upper_bounds_monotone(m in 1i64..100_000, n in 1i64..100_000, q in 0i64..1000, dm in 1i64..1000) {
        for f in FormulaName::ALL {
            if *f == FormulaName::DegreePlan || *f == FormulaName::DdBipartite || *f == FormulaName::DdVariety {
                continue;
            }
            let params = |m: i64| [("m", m), ("n", n), ("q", q), ("k", 3), ("s", 3), ("r", 2)];
            let lo = eval_bound(&BoundFormula::with_ints(*f, &params(m))).unwrap();
            let hi = eval_bound(&BoundFormula::with_ints(*f, &params(m + dm))).unwrap();
            prop_assert!(hi >= lo * (1.0 - 1e-12), "{f}: {lo} then {hi}");
        }
    }

    #[test]
    fn fit_recovers_power_law(num in 1i64..8, den in 1i64..4) {
        let e = num as f64 / den as f64;
        let series: Vec<(u64, u64)> = (1..=6).map(|i| {
            let s = 1u64 << (den * i);
            (s, 1u64 << (num * i))
        }).collect();
        let fit = fit_exponent(&series).unwrap();
        prop_assert!((fit.slope - e).abs() < 1e-9);
        prop_assert!(fit.residual < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn partition_caps_and_round_trips(
        raw in btree_set((0i64..1000, 0i64..1000, 0i64..1000), 64..160),
        t in 1usize..=3,
        seed in 0u64..1000,
    ) {
        let pts: Vec<Point3> = raw.into_iter().map(|(x, y, z)| Point3::from_i64(x, y, z)).collect();
        let delta = Scalar::from_frac(1, 2);
        let part = build_partition(&pts, t, &delta, seed).unwrap();
        let census = cell_census(&pts, &part);
        prop_assert_eq!(census.values().sum::<usize>(), pts.len());
        // every open cell holds at most m ((1 + delta) / 2^t) points
        let cap = pts.len() as f64 * 1.5 / (1u64 << t) as f64;
        for (label, &count) in &census {
            if label.is_open() {
                prop_assert!(count as f64 <= cap.floor() + 1e-9, "{label}: {count} > {cap}");
            }
        }
        let rho = round_ratio(&delta, t);
        prop_assert!(rho >= Scalar::from_frac(1, 2));
        prop_assert!(num_traits::pow(rho * Scalar::from_i64(2), t) <= Scalar::from_i64(1) + delta.clone());
        prop_assert_eq!(partition_from_json(&partition_to_json(&part)).unwrap(), part.clone());
        let d = part.total_degree as usize;
        for i in 0..10i64 {
            let l = Curve::line(Point3::from_i64(i, 500, -3 * i), Point3::from_i64(1, i - 5, 2)).unwrap();
            prop_assert!(crossing_census(&l, &part).unwrap() <= d + 1);
        }
    }
}
