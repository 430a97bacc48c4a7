use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{Curve, Point3, Surface};
use crate::scalar::ExactField;

/// Anything a point can be exactly incident to.
pub trait Incident<F: ExactField>: Sync {
    fn incident(&self, p: &Point3<F>) -> bool;
}

impl<F: ExactField> Incident<F> for Surface<F> {
    fn incident(&self, p: &Point3<F>) -> bool {
        self.contains_point(p)
    }
}

impl<F: ExactField> Incident<F> for Curve<F> {
    fn incident(&self, p: &Point3<F>) -> bool {
        self.contains_point(p)
    }
}

/// Bipartite incidence graph. Ids are positions in the input slices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IncidenceGraph {
    pub point_ids: Vec<usize>,
    pub object_ids: Vec<usize>,
    /// `(point_id, object_id)`, sorted and duplicate free.
    pub edges: BTreeSet<(usize, usize)>,
}

impl IncidenceGraph {
    pub fn with_edges(points: usize, objects: usize, edges: BTreeSet<(usize, usize)>) -> Self {
        IncidenceGraph {
            point_ids: (0..points).collect(),
            object_ids: (0..objects).collect(),
            edges,
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Sorted object neighbourhood of every point id.
    pub fn point_neighbours(&self) -> Vec<Vec<usize>> {
        let n = self.point_ids.iter().max().map_or(0, |m| m + 1);
        let mut out = vec![Vec::new(); n];
        for &(p, o) in &self.edges {
            out[p].push(o);
        }
        out
    }

    /// Sorted point neighbourhood of every object id.
    pub fn object_neighbours(&self) -> Vec<Vec<usize>> {
        let n = self.object_ids.iter().max().map_or(0, |m| m + 1);
        let mut out = vec![Vec::new(); n];
        for &(p, o) in &self.edges {
            out[o].push(p);
        }
        out
    }
}

/// Exact incidence count and graph between `points` and `objects`.
pub fn count_incidences<F, O>(points: &[Point3<F>], objects: &[O]) -> (usize, IncidenceGraph)
where
    F: ExactField,
    O: Incident<F>,
{
    let rows: Vec<Vec<(usize, usize)>> = points
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            objects
                .iter()
                .enumerate()
                .filter(|(_, o)| o.incident(p))
                .map(|(j, _)| (i, j))
                .collect()
        })
        .collect();
    let edges: BTreeSet<(usize, usize)> = rows.into_iter().flatten().collect();
    let g = IncidenceGraph::with_edges(points.len(), objects.len(), edges);
    (g.len(), g)
}

/// Largest `r` and `s` accepted by [`contains_krs`].
pub const KRS_GUARD: usize = 4;

/// True iff some `r` points and `s` objects are pairwise incident.
pub fn contains_krs(g: &IncidenceGraph, r: usize, s: usize) -> Result<bool> {
    if r > KRS_GUARD || s > KRS_GUARD {
        return Err(Error::GuardExceeded(format!(
            "K_{{{r},{s}}} detection limited to r, s <= {KRS_GUARD}"
        )));
    }
    if r == 0 || s == 0 {
        return Err(Error::Precondition("r and s must be positive".into()));
    }
    let nbrs = g.point_neighbours();
    let candidates: Vec<usize> = (0..nbrs.len()).filter(|&p| nbrs[p].len() >= s).collect();
    Ok(search(&nbrs, &candidates, 0, r, s, None))
}

fn search(
    nbrs: &[Vec<usize>],
    cand: &[usize],
    start: usize,
    left: usize,
    s: usize,
    common: Option<&[usize]>,
) -> bool {
    if left == 0 {
        return true;
    }
    for i in start..cand.len() {
        if cand.len() - i < left {
            break;
        }
        let own = &nbrs[cand[i]];
        let next: Vec<usize> = match common {
            None => own.clone(),
            Some(c) => intersect_sorted(c, own),
        };
        if next.len() >= s && search(nbrs, cand, i + 1, left - 1, s, Some(&next)) {
            return true;
        }
    }
    false
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
