use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{curve_pair_intersection, Curve, Point3};
use crate::scalar::ExactField;

/// Points lying on at least `r` of the given lines and circles, with their
/// exact multiplicities, sorted by point.
pub fn rich_points<F: ExactField>(curves: &[Curve<F>], r: usize) -> Result<Vec<(Point3<F>, usize)>> {
    if r < 2 {
        return Err(Error::Precondition(format!("richness r = {r} must be >= 2")));
    }
    if let Some(c) = curves.iter().find(|c| matches!(c, Curve::ImplicitPair { .. })) {
        return Err(Error::Unsupported(format!("rich points of {c:?}")));
    }
    let n = curves.len();
    let per_curve: Vec<Result<Vec<Point3<F>>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            for j in (i + 1)..n {
                out.extend(curve_pair_intersection(&curves[i], &curves[j])?);
            }
            Ok(out)
        })
        .collect();
    let mut candidates = BTreeSet::new();
    for pts in per_curve {
        candidates.extend(pts?);
    }
    let candidates: Vec<Point3<F>> = candidates.into_iter().collect();
    let rich = candidates
        .into_par_iter()
        .filter_map(|p| {
            let mult = curves.iter().filter(|c| c.contains_point(&p)).count();
            (mult >= r).then_some((p, mult))
        })
        .collect();
    Ok(rich)
}
