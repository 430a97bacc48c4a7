use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::build::PartitionPolynomial;
use num_bigint::BigInt;
use num_integer::Integer;

use super::univariate::{count_roots, eval, gcd, isolate_roots, split_point, squarefree, sturm_sequence, trim};
use crate::error::{Error, Result};
use crate::Curve;
use crate::{Point3, Scalar};

/// Open sign cell (`true` = positive factor) or the zero-set class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellLabel {
    Open(Vec<bool>),
    Zero,
}

impl CellLabel {
    pub fn is_open(&self) -> bool {
        matches!(self, CellLabel::Open(_))
    }
}

impl fmt::Display for CellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellLabel::Open(s) => {
                for &b in s {
                    f.write_str(if b { "+" } else { "-" })?;
                }
                Ok(())
            }
            CellLabel::Zero => f.write_str("Z"),
        }
    }
}

impl std::str::FromStr for CellLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "Z" {
            return Ok(CellLabel::Zero);
        }
        s.chars()
            .map(|c| match c {
                '+' => Ok(true),
                '-' => Ok(false),
                _ => Err(Error::Parse(format!("bad cell label {s:?}"))),
            })
            .collect::<Result<Vec<bool>>>()
            .map(CellLabel::Open)
    }
}

pub fn classify(p: &Point3, part: &PartitionPolynomial) -> CellLabel {
    let mut signs = Vec::with_capacity(part.rounds);
    for f in &part.round_factors {
        let v = f.eval(p);
        if v.is_zero() {
            return CellLabel::Zero;
        }
        signs.push(v.is_positive());
    }
    CellLabel::Open(signs)
}

/// Exact label counts; labels absent from the map hold no points.
pub fn cell_census(points: &[Point3], part: &PartitionPolynomial) -> BTreeMap<CellLabel, usize> {
    let labels: Vec<CellLabel> = points.par_iter().map(|p| classify(p, part)).collect();
    let mut out = BTreeMap::new();
    for l in labels {
        *out.entry(l).or_insert(0) += 1;
    }
    out
}

/// Largest open-cell population.
pub fn max_open_population(census: &BTreeMap<CellLabel, usize>) -> usize {
    census
        .iter()
        .filter(|(l, _)| l.is_open())
        .map(|(_, &c)| c)
        .max()
        .unwrap_or(0)
}

/// Number of distinct open cells met by a line.
///
/// Each factor restricted to the line is a univariate polynomial in the
/// line parameter. Their real roots are isolated one factor at a time and
/// the isolating intervals refined until intervals of different factors
/// are disjoint or share a common root; one sample per root-free gap then
/// sees every open label the line meets.
pub fn crossing_census(line: &Curve, part: &PartitionPolynomial) -> Result<usize> {
    let Curve::Line { origin, direction } = line else {
        return Err(Error::Precondition(format!("crossing census needs a line, got {line:?}")));
    };
    let restricted: Vec<Vec<Scalar>> = part
        .round_factors
        .iter()
        .map(|f| primitive(trim(f.restrict_to_line(origin, direction))))
        .collect();
    if restricted.iter().any(|r| r.is_empty()) {
        // the line lies in some factor's zero set
        return Ok(0);
    }
    let mut seen = BTreeSet::new();
    for s in gap_samples(&restricted) {
        let signs: Vec<bool> = restricted.iter().map(|r| eval(r, &s).is_positive()).collect();
        seen.insert(signs);
    }
    Ok(seen.len())
}

/// Positive multiple with coprime integer coefficients; signs are kept.
fn primitive(p: Vec<Scalar>) -> Vec<Scalar> {
    if p.is_empty() {
        return p;
    }
    let den = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Scalar::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.into_iter().map(|c| Scalar::from_integer(c / &g)).collect()
}

struct Root {
    factor: usize,
    lo: Scalar,
    hi: Scalar,
}

/// Bisects an isolating interval of `p`, keeping the half with the root.
fn refine(seq: &[Vec<Scalar>], p: &[Scalar], r: &mut Root) {
    let mid = split_point(p, &r.lo, &r.hi);
    if count_roots(seq, &r.lo, &mid) == 1 {
        r.hi = mid;
    } else {
        r.lo = mid;
    }
}

/// Points avoiding every root of every factor, one in each maximal
/// root-free interval of the line.
fn gap_samples(polys: &[Vec<Scalar>]) -> Vec<Scalar> {
    let sq: Vec<Vec<Scalar>> = polys.iter().map(|p| squarefree(p)).collect();
    let seqs: Vec<Vec<Vec<Scalar>>> = sq.iter().map(|p| sturm_sequence(p)).collect();
    let mut roots: Vec<Root> = Vec::new();
    for (factor, p) in sq.iter().enumerate() {
        for (lo, hi) in isolate_roots(p) {
            roots.push(Root { factor, lo, hi });
        }
    }
    // Invariant: each root's open interval holds exactly one root of its
    // factor, and its endpoints are not roots of that factor.
    loop {
        roots.sort_by(|a, b| a.lo.cmp(&b.lo));
        let Some(i) = (1..roots.len()).find(|&i| roots[i - 1].hi > roots[i].lo) else {
            break;
        };
        let (fa, fb) = (roots[i - 1].factor, roots[i].factor);
        let lo = roots[i].lo.clone();
        let hi = roots[i - 1].hi.clone().min(roots[i].hi.clone());
        let g = gcd(&sq[fa], &sq[fb]);
        if g.len() >= 2 && count_roots(&sturm_sequence(&g), &lo, &hi) >= 1 {
            // the same root: the overlap isolates it for both factors
            roots[i].hi = hi;
            roots.remove(i - 1);
            continue;
        }
        let wa = roots[i - 1].hi.clone() - roots[i - 1].lo.clone();
        let wb = roots[i].hi.clone() - roots[i].lo.clone();
        let k = if wa >= wb { i - 1 } else { i };
        let f = roots[k].factor;
        refine(&seqs[f], &sq[f], &mut roots[k]);
    }
    let Some(first) = roots.first() else {
        return vec![Scalar::zero()];
    };
    let mut out = vec![first.lo.clone() - Scalar::one()];
    out.extend(roots.iter().map(|r| r.hi.clone()));
    out
}
