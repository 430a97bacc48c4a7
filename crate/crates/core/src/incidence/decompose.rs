use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::graph::count_incidences;
use crate::error::{Error, Result};
use crate::geom::{surface_pair_intersection, Curve, Point3, Surface};
use crate::scalar::ExactField;

/// One complete bipartite block `P_gamma x S_gamma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component<F: ExactField> {
    pub gamma: Curve<F>,
    pub p_ids: Vec<usize>,
    pub s_ids: Vec<usize>,
}

/// The incidence graph written as residual edges plus complete bipartite
/// blocks over curves shared by at least two surfaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteDecomposition<F: ExactField> {
    pub components: Vec<Component<F>>,
    pub residual_edges: BTreeSet<(usize, usize)>,
    /// Largest number of components covering a single incident pair.
    pub max_pair_multiplicity: usize,
    /// Largest number of components a single surface participates in.
    pub max_components_per_surface: usize,
}

impl<F: ExactField> Default for BipartiteDecomposition<F> {
    fn default() -> Self {
        BipartiteDecomposition {
            components: Vec::new(),
            residual_edges: BTreeSet::new(),
            max_pair_multiplicity: 0,
            max_components_per_surface: 0,
        }
    }
}

impl<F: ExactField> BipartiteDecomposition<F> {
    /// Every edge covered by some block or by the residual.
    pub fn covered_edges(&self) -> BTreeSet<(usize, usize)> {
        let mut out = self.residual_edges.clone();
        for c in &self.components {
            for &p in &c.p_ids {
                for &s in &c.s_ids {
                    out.insert((p, s));
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JValue {
    pub j: usize,
    pub sum_p: usize,
    pub sum_s: usize,
    pub g0: usize,
}

pub fn j_value<F: ExactField>(d: &BipartiteDecomposition<F>) -> JValue {
    let sum_p = d.components.iter().map(|c| c.p_ids.len()).sum();
    let sum_s = d.components.iter().map(|c| c.s_ids.len()).sum();
    JValue { j: sum_p + sum_s, sum_p, sum_s, g0: d.residual_edges.len() }
}

/// Decomposes `G(P, S)` for planes and spheres.
///
/// Curves shared by two or more surfaces but carrying no point of `P` are
/// omitted, since they cover no edge.
pub fn decompose<F: ExactField>(
    points: &[Point3<F>],
    surfaces: &[Surface<F>],
) -> Result<BipartiteDecomposition<F>> {
    if let Some(s) = surfaces.iter().find(|s| matches!(s, Surface::Implicit { .. })) {
        return Err(Error::Unsupported(format!(
            "decomposition of implicit surface {s:?}"
        )));
    }
    let canon: Vec<Surface<F>> = surfaces.iter().map(|s| s.canonicalize()).collect();
    let mut seen = BTreeMap::new();
    for (i, s) in canon.iter().enumerate() {
        if let Some(j) = seen.insert(s, i) {
            return Err(Error::Precondition(format!(
                "surfaces {j} and {i} coincide"
            )));
        }
    }

    let n = canon.len();
    let pair_curves: Vec<Vec<(Curve<F>, usize, usize)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..n)
                .filter_map(|j| {
                    surface_pair_intersection(&canon[i], &canon[j])
                        .curve()
                        .map(|c| (c.clone(), i, j))
                })
                .collect()
        })
        .collect();
    let mut gamma0: BTreeMap<Curve<F>, BTreeSet<usize>> = BTreeMap::new();
    for (c, i, j) in pair_curves.into_iter().flatten() {
        let e = gamma0.entry(c).or_default();
        e.insert(i);
        e.insert(j);
    }

    let blocks: Vec<Option<Component<F>>> = gamma0
        .into_iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(gamma, s_set)| {
            let p_ids: Vec<usize> = points
                .iter()
                .enumerate()
                .filter(|(_, p)| gamma.contains_point(p))
                .map(|(i, _)| i)
                .collect();
            (!p_ids.is_empty()).then(|| Component {
                gamma,
                p_ids,
                s_ids: s_set.into_iter().collect(),
            })
        })
        .collect();
    let components: Vec<Component<F>> = blocks.into_iter().flatten().collect();

    let mut cover: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut per_surface = vec![0usize; n];
    for c in &components {
        for &s in &c.s_ids {
            per_surface[s] += 1;
            for &p in &c.p_ids {
                *cover.entry((p, s)).or_default() += 1;
            }
        }
    }
    let (_, graph) = count_incidences(points, surfaces);
    let residual_edges = graph
        .edges
        .iter()
        .filter(|e| !cover.contains_key(e))
        .copied()
        .collect();
    Ok(BipartiteDecomposition {
        components,
        residual_edges,
        max_pair_multiplicity: cover.values().copied().max().unwrap_or(0),
        max_components_per_surface: per_surface.into_iter().max().unwrap_or(0),
    })
}
