//! Iterated approximate bisection of point sets by polynomials.
//!
//! Round `i` bisects every current sign cell at once with a single
//! polynomial of degree `round_degree(i)`. The search runs in floating point
//! on normalized coordinates, lifting each point by its monomials; the zero
//! set is pulled through one median point of every cell by repeated
//! minimum-norm corrections. The candidate is then snapped to integers, its
//! pins are re-imposed exactly, and it is accepted only if an exact count
//! confirms the per-round population cap in every cell.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::degree::round_degree;
use crate::error::{Error, Result};
use crate::geom::Exponent;
use crate::scalar::ExactField;
use crate::{Point3, Scalar, TriPoly};

/// Largest supported number of rounds.
pub const MAX_ROUNDS: usize = 4;
/// Default number of candidates examined before giving up.
pub const DEFAULT_BUDGET: usize = 10_000;
/// Exhaustive plane search is used for `delta = 0` below this many points.
pub const EXHAUSTIVE_LIMIT: usize = 24;

/// Product of round factors; cells are sign vectors of the factors.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionPolynomial {
    pub round_factors: Vec<TriPoly>,
    pub rounds: usize,
    pub total_degree: u32,
    pub delta: Scalar,
    pub seed: u64,
}

impl PartitionPolynomial {
    pub fn from_factors(round_factors: Vec<TriPoly>, delta: Scalar, seed: u64) -> Result<Self> {
        if round_factors.is_empty() {
            return Err(Error::Precondition("partition needs at least one factor".into()));
        }
        if round_factors.iter().any(|f| f.is_zero()) {
            return Err(Error::InvalidGeometry("partition factor is zero".into()));
        }
        let total_degree = round_factors.iter().map(|f| f.degree()).sum();
        Ok(PartitionPolynomial {
            rounds: round_factors.len(),
            round_factors,
            total_degree,
            delta,
            seed,
        })
    }

    /// The partitioning polynomial itself.
    pub fn product(&self) -> TriPoly {
        self.round_factors
            .iter()
            .fold(TriPoly::constant(Scalar::one()), |acc, f| &acc * f)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    pub budget: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { budget: DEFAULT_BUDGET }
    }
}

pub fn build_partition(
    points: &[Point3],
    t: usize,
    delta: &Scalar,
    seed: u64,
) -> Result<PartitionPolynomial> {
    build_partition_with(points, t, delta, seed, BuildOptions::default())
}

/// Per-round population ratio `rho` with `(2 rho)^t <= 1 + delta`, so that
/// `t` rounds leave at most `(1 + delta) |P| / 2^t` points in any cell.
pub fn round_ratio(delta: &Scalar, t: usize) -> Scalar {
    let half = Scalar::from_frac(1, 2);
    if delta.is_zero() {
        return half;
    }
    let target = Scalar::one() + delta.clone();
    let f = ExactField::to_f64(&target).powf(1.0 / t as f64) / 2.0;
    let den = 1i64 << 20;
    let mut num = (f * den as f64).floor() as i64;
    loop {
        let r = Scalar::from_frac(num, den);
        let two_r = r.clone() * Scalar::from_i64(2);
        if num_traits::pow(two_r, t) <= target {
            return if r < half { half } else { r };
        }
        num -= 1;
    }
}

fn cap(rho: &Scalar, s: usize) -> usize {
    (rho.clone() * Scalar::from_i64(s as i64))
        .floor()
        .to_integer()
        .to_usize()
        .expect("cap fits usize")
}

/// Nonconstant monomials of degree at most `d`.
pub fn lift_exponents(d: u32) -> Vec<Exponent> {
    let mut out = Vec::new();
    for total in 1..=d {
        for i in (0..=total).rev() {
            for j in (0..=(total - i)).rev() {
                out.push([i, j, total - i - j]);
            }
        }
    }
    out
}

/// Affine change of coordinates `u = (x - center) / scale` into roughly the
/// unit cube, with dyadic exact data.
struct Normalizer {
    center: Point3,
    scale: Scalar,
}

impl Normalizer {
    fn new(points: &[Point3]) -> Self {
        let f: Vec<[f64; 3]> = points.iter().map(|p| p.to_f64()).collect();
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for p in &f {
            for k in 0..3 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let dy = |v: f64| {
            let den = 1i64 << 16;
            Scalar::from_frac((v * den as f64).round() as i64, den)
        };
        let mid: Vec<Scalar> = (0..3).map(|k| dy((lo[k] + hi[k]) / 2.0)).collect();
        let half = (0..3).map(|k| (hi[k] - lo[k]) / 2.0).fold(0.0, f64::max);
        let e = if half > 0.0 { half.log2().ceil().clamp(-30.0, 60.0) as i32 } else { 0 };
        let scale = if e >= 0 {
            Scalar::from_i64(1i64 << e)
        } else {
            Scalar::from_frac(1, 1i64 << (-e))
        };
        Normalizer {
            center: Point3::new(mid[0].clone(), mid[1].clone(), mid[2].clone()),
            scale,
        }
    }

    fn apply(&self, p: &Point3) -> Point3 {
        p.sub(&self.center).scale(&(Scalar::one() / self.scale.clone()))
    }

    /// `g(x) = h((x - center) / scale)`.
    fn pull_back(&self, h: &TriPoly) -> TriPoly {
        let inv = Scalar::one() / self.scale.clone();
        let z = Scalar::zero();
        let sub = |k: usize, c: &Scalar| {
            let mut a = [z.clone(), z.clone(), z.clone()];
            a[k] = inv.clone();
            let [a0, a1, a2] = a;
            TriPoly::affine(a0, a1, a2, -c.clone() * inv.clone())
        };
        h.compose(
            &sub(0, &self.center.x),
            &sub(1, &self.center.y),
            &sub(2, &self.center.z),
        )
    }
}

fn monomial_f64(u: &[f64; 3], e: &Exponent) -> f64 {
    u[0].powi(e[0] as i32) * u[1].powi(e[1] as i32) * u[2].powi(e[2] as i32)
}

fn monomial_exact(u: &Point3, e: &Exponent) -> Scalar {
    num_traits::pow(u.x.clone(), e[0] as usize)
        * num_traits::pow(u.y.clone(), e[1] as usize)
        * num_traits::pow(u.z.clone(), e[2] as usize)
}

struct Round<'a> {
    cells: &'a [Vec<usize>],
    caps: &'a [usize],
    exps: Vec<Exponent>,
    /// Lifted features (without the constant) of every point.
    feats: Vec<Vec<f64>>,
    exact_u: &'a [Point3],
}

struct Search<'a> {
    rng: ChaCha8Rng,
    budget: usize,
    used: usize,
    best_imbalance: f64,
    norm: &'a Normalizer,
}

impl Search<'_> {
    fn spend(&mut self) -> bool {
        if self.used >= self.budget {
            return false;
        }
        self.used += 1;
        true
    }
}

pub fn build_partition_with(
    points: &[Point3],
    t: usize,
    delta: &Scalar,
    seed: u64,
    opts: BuildOptions,
) -> Result<PartitionPolynomial> {
    if t > MAX_ROUNDS {
        return Err(Error::GuardExceeded(format!("{t} rounds requested, at most {MAX_ROUNDS} supported")));
    }
    if t == 0 {
        return Err(Error::Precondition("at least one round is required".into()));
    }
    if points.len() < (1 << t) {
        return Err(Error::Precondition(format!(
            "{} points cannot feed {t} bisection rounds (need {})",
            points.len(),
            1usize << t
        )));
    }
    if delta.is_negative() {
        return Err(Error::OutOfRange(format!("delta = {delta} must be >= 0")));
    }
    let rho = round_ratio(delta, t);
    let norm = Normalizer::new(points);
    let exact_u: Vec<Point3> = points.iter().map(|p| norm.apply(p)).collect();
    let float_u: Vec<[f64; 3]> = exact_u.iter().map(|u| u.to_f64()).collect();

    let mut search = Search {
        rng: ChaCha8Rng::seed_from_u64(seed),
        budget: opts.budget,
        used: 0,
        best_imbalance: f64::INFINITY,
        norm: &norm,
    };
    let mut labels: Vec<Option<Vec<bool>>> = vec![Some(Vec::new()); points.len()];
    let mut factors = Vec::with_capacity(t);

    for round in 1..=t {
        let d = round_degree(round as u32);
        let mut by_label: BTreeMap<Vec<bool>, Vec<usize>> = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if let Some(l) = l {
                by_label.entry(l.clone()).or_default().push(i);
            }
        }
        let cells: Vec<Vec<usize>> = by_label.into_values().collect();
        let caps: Vec<usize> = cells.iter().map(|c| cap(&rho, c.len())).collect();

        let factor = if cells.is_empty() {
            TriPoly::x()
        } else {
            let exps = lift_exponents(d);
            let feats = float_u
                .iter()
                .map(|u| exps.iter().map(|e| monomial_f64(u, e)).collect())
                .collect();
            let r = Round { cells: &cells, caps: &caps, exps, feats, exact_u: &exact_u };
            let exhaustive = delta.is_zero() && points.len() < EXHAUSTIVE_LIMIT && d == 1;
            let found = if exhaustive { exhaustive_planes(&r, &mut search) } else { None };
            match found.or_else(|| pinned_search(&r, &mut search)) {
                Some(h) => norm.pull_back(&h),
                None => {
                    return Err(Error::BudgetExhausted {
                        candidates: search.used,
                        best_imbalance: search.best_imbalance,
                    })
                }
            }
        };
        for (i, l) in labels.iter_mut().enumerate() {
            if let Some(signs) = l {
                let v = factor.eval(&points[i]);
                if v.is_zero() {
                    *l = None;
                } else {
                    signs.push(v.is_positive());
                }
            }
        }
        factors.push(factor);
    }
    PartitionPolynomial::from_factors(factors, delta.clone(), seed)
}

/// Exact check of the population caps for `h` in normalized coordinates.
fn verify(r: &Round, h: &TriPoly, search: &mut Search) -> bool {
    let mut worst = 0.0f64;
    let mut ok = true;
    for (cell, &c) in r.cells.iter().zip(r.caps) {
        let (mut pos, mut neg) = (0usize, 0usize);
        for &i in cell {
            let v = h.eval(&r.exact_u[i]);
            if v.is_positive() {
                pos += 1;
            } else if v.is_negative() {
                neg += 1;
            }
        }
        worst = worst.max(pos.max(neg) as f64 / cell.len() as f64);
        ok &= pos <= c && neg <= c;
    }
    search.best_imbalance = search.best_imbalance.min(worst);
    ok
}

fn exhaustive_planes(r: &Round, search: &mut Search) -> Option<TriPoly> {
    let live: Vec<usize> = r.cells.iter().flatten().copied().collect();
    let mut triples = Vec::new();
    for a in 0..live.len() {
        for b in (a + 1)..live.len() {
            for c in (b + 1)..live.len() {
                triples.push((live[a], live[b], live[c]));
            }
        }
    }
    triples.shuffle(&mut search.rng);
    for (a, b, c) in triples {
        let (pa, pb, pc) = (&r.exact_u[a], &r.exact_u[b], &r.exact_u[c]);
        let n = pb.sub(pa).cross(&pc.sub(pa));
        if n.is_zero() {
            continue;
        }
        if !search.spend() {
            return None;
        }
        let h = TriPoly::affine(n.x.clone(), n.y.clone(), n.z.clone(), -n.dot(pa));
        if verify(r, &h, search) {
            return Some(h);
        }
    }
    None
}

/// Index of the lower median of `cell` under `vals`.
fn median_of(cell: &[usize], vals: &[f64]) -> usize {
    let mut idx: Vec<usize> = cell.to_vec();
    idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
    idx[(idx.len() - 1) / 2]
}

fn pinned_search(r: &Round, search: &mut Search) -> Option<TriPoly> {
    let dim = r.exps.len() + 1;
    let k = r.cells.len();
    let npts = r.feats.len();
    let value = |coef: &DVector<f64>, i: usize| {
        coef[0] + r.feats[i].iter().zip(coef.iter().skip(1)).map(|(f, c)| f * c).sum::<f64>()
    };
    loop {
        let mut coef = DVector::from_fn(dim, |_, _| search.rng.gen_range(-1.0..1.0));
        let mut prev: Option<Vec<usize>> = None;
        for _ in 0..60 {
            if !search.spend() {
                return None;
            }
            let vals: Vec<f64> = (0..npts).map(|i| value(&coef, i)).collect();
            let pins: Vec<usize> = r.cells.iter().map(|c| median_of(c, &vals)).collect();
            let resid = pins.iter().map(|&i| vals[i].abs()).fold(0.0, f64::max);
            if prev.as_ref() == Some(&pins) && resid < 1e-9 * coef.norm() {
                if let Some(h) = exact_candidate(r, &coef, &pins, search) {
                    return Some(h);
                }
                // refine: nudge one coordinate and keep pinning
                let j = search.rng.gen_range(0..dim);
                let step = coef.norm() * search.rng.gen_range(-0.05..0.05);
                coef[j] += step;
                prev = None;
                continue;
            }
            let a = DMatrix::from_fn(k, dim, |row, col| {
                if col == 0 {
                    1.0
                } else {
                    r.feats[pins[row]][col - 1]
                }
            });
            let rhs = DVector::from_iterator(k, pins.iter().map(|&i| -vals[i]));
            let pinv = match a.clone().pseudo_inverse(1e-12) {
                Ok(p) => p,
                Err(_) => break,
            };
            coef += pinv * rhs;
            let nrm = coef.norm();
            if !nrm.is_finite() || nrm == 0.0 {
                break;
            }
            coef /= nrm;
            prev = Some(pins);
        }
    }
}

/// Snaps `coef` to integers, re-imposes `h(pin) = 0` exactly by a
/// minimum-norm rational correction, and verifies.
fn exact_candidate(r: &Round, coef: &DVector<f64>, pins: &[usize], search: &mut Search) -> Option<TriPoly> {
    if !search.spend() {
        return None;
    }
    let _ = search.norm;
    let maxc = coef.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let scale = (1u64 << 24) as f64 / maxc;
    let mut c: Vec<Scalar> = coef
        .iter()
        .map(|v| Scalar::from_i64((v * scale).round() as i64))
        .collect();
    let rows: Vec<Vec<Scalar>> = pins
        .iter()
        .map(|&i| {
            let mut row = vec![Scalar::one()];
            row.extend(r.exps.iter().map(|e| monomial_exact(&r.exact_u[i], e)));
            row
        })
        .collect();
    let resid: Vec<Scalar> = rows
        .iter()
        .map(|row| -row.iter().zip(&c).fold(Scalar::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
        .collect();
    let y = solve_gram(&rows, &resid)?;
    for (row, yi) in rows.iter().zip(&y) {
        for (cj, aj) in c.iter_mut().zip(row) {
            *cj = cj.clone() + aj.clone() * yi.clone();
        }
    }
    let mut h = TriPoly::constant(c[0].clone());
    for (e, cj) in r.exps.iter().zip(&c[1..]) {
        h.add_term(*e, cj.clone());
    }
    if h.is_constant() {
        return None;
    }
    verify(r, &h, search).then_some(h)
}

/// Solves `(A A^T) y = b` exactly; `None` if the Gram matrix is singular.
fn solve_gram(a: &[Vec<Scalar>], b: &[Scalar]) -> Option<Vec<Scalar>> {
    let k = a.len();
    let dot = |u: &[Scalar], v: &[Scalar]| {
        u.iter().zip(v).fold(Scalar::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
    };
    let mut m: Vec<Vec<Scalar>> = (0..k)
        .map(|i| {
            let mut row: Vec<Scalar> = (0..k).map(|j| dot(&a[i], &a[j])).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    for col in 0..k {
        let piv = (col..k).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for j in col..=k {
            m[col][j] = m[col][j].clone() / p.clone();
        }
        for r in 0..k {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in col..=k {
                    let v = m[col][j].clone() * f.clone();
                    m[r][j] = m[r][j].clone() - v;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[k].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_compounds_to_target() {
        let d = Scalar::from_frac(1, 4);
        for t in 1..=4 {
            let r = round_ratio(&d, t);
            let two_r = r.clone() * Scalar::from_i64(2);
            assert!(num_traits::pow(two_r, t) <= Scalar::one() + d.clone());
            assert!(ExactField::to_f64(&r) > 0.5);
        }
        assert_eq!(round_ratio(&Scalar::zero(), 3), Scalar::from_frac(1, 2));
    }

    #[test]
    fn lift_dimensions() {
        assert_eq!(lift_exponents(1).len(), 3);
        assert_eq!(lift_exponents(2).len(), 9);
        assert_eq!(lift_exponents(3).len(), 19);
    }

    #[test]
    fn normalizer_round_trip() {
        let pts = vec![Point3::from_i64(10, -4, 3), Point3::from_i64(30, 0, 3)];
        let n = Normalizer::new(&pts);
        let h = &TriPoly::x() + &TriPoly::constant(Scalar::from_frac(1, 3));
        let g = n.pull_back(&h);
        for p in &pts {
            assert_eq!(g.eval(p), h.eval(&n.apply(p)));
        }
    }

    #[test]
    fn guards() {
        let pts: Vec<Point3> = (0..3).map(|i| Point3::from_i64(i, 0, 0)).collect();
        assert!(matches!(
            build_partition(&pts, 2, &Scalar::zero(), 0),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            build_partition(&pts, 5, &Scalar::zero(), 0),
            Err(Error::GuardExceeded(_))
        ));
    }
}
